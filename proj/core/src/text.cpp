#include "text.hpp"

#include <cctype>

namespace lotva::detail {

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) line.tokens.push_back({raw.substr(start, i - start), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::vector<Token> comma_list(const Line& line, std::size_t first) {
  std::vector<Token> items;
  bool expect_item = true;
  for (std::size_t t = first; t < line.tokens.size(); ++t) {
    std::string_view s = line.tokens[t].text;
    std::size_t col = line.tokens[t].column;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto comma = s.find(',', pos);
      std::string_view piece = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      if (!piece.empty()) {
        if (!expect_item) syntax_error(line, {piece, col + pos}, "expected ',' before '" + std::string(piece) + "'");
        items.push_back({piece, col + pos});
        expect_item = false;
      }
      if (comma == std::string_view::npos) break;
      if (expect_item) syntax_error(line, {s.substr(comma, 1), col + comma}, "empty list item");
      expect_item = true;
      pos = comma + 1;
    }
  }
  if (items.empty()) syntax_error(line, "expected a comma-separated list");
  if (expect_item) syntax_error(line, "trailing ','");
  return items;
}

void syntax_error(const Line& line, const Token& at, const std::string& what) {
  throw ParseError(ParseError::Kind::syntax, line.number, at.column, what);
}

void syntax_error(const Line& line, const std::string& what) {
  throw ParseError(ParseError::Kind::syntax, line.number, line.tokens.empty() ? 0 : line.tokens.front().column, what);
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) {
    syntax_error(line, "'" + std::string(line.tokens[0].text) + "' takes " + std::to_string(n - 1) +
                           " argument(s), got " + std::to_string(line.tokens.size() - 1));
  }
}

std::string_view identifier(const Line& line, std::size_t index) {
  const Token& t = line.tokens.at(index);
  if (!is_identifier(t.text)) syntax_error(line, t, "invalid identifier '" + std::string(t.text) + "'");
  return t.text;
}

}  // namespace lotva::detail
