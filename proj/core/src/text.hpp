#pragma once

// Line tokenizer shared by the line-based file formats.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lotva/error.hpp"

namespace lotva::detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;  // 1-based
  std::vector<Token> tokens;
};

// Splits on whitespace, drops `#` comments and blank lines.
std::vector<Line> tokenize(std::string_view text);

bool is_identifier(std::string_view s);

// Comma-separated list starting at token `first`; whitespace between items
// is tolerated. Returns the items with the column of their token.
std::vector<Token> comma_list(const Line& line, std::size_t first);

[[noreturn]] void syntax_error(const Line& line, const Token& at, const std::string& what);
[[noreturn]] void syntax_error(const Line& line, const std::string& what);

void expect_arity(const Line& line, std::size_t n);
std::string_view identifier(const Line& line, std::size_t index);

}  // namespace lotva::detail
