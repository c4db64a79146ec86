#include "lotva/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lotva/error.hpp"
#include "text.hpp"

namespace lotva {

TwoComplex::TwoComplex(std::string name, std::vector<std::string> edge_names, std::vector<Cell> cells)
    : name_(std::move(name)), edge_names_(std::move(edge_names)), cells_(std::move(cells)) {
  std::set<std::string_view> names;
  for (const auto& e : edge_names_)
    if (!names.insert(e).second) throw InvalidInput("duplicate edge name '" + e + "'");
  std::set<std::string_view> cell_names;
  for (const auto& c : cells_) {
    if (!cell_names.insert(c.name).second) throw InvalidInput("duplicate cell name '" + c.name + "'");
    if (c.boundary.letters.empty()) throw InvalidInput("cell '" + c.name + "' has an empty boundary");
    for (const auto& l : c.boundary.letters)
      if (l.edge >= edge_names_.size()) throw InvalidInput("cell '" + c.name + "' uses an unknown edge");
  }
}

std::optional<std::size_t> TwoComplex::find_edge(std::string_view name) const {
  auto it = std::find(edge_names_.begin(), edge_names_.end(), name);
  if (it == edge_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - edge_names_.begin());
}

std::optional<std::size_t> TwoComplex::find_cell(std::string_view name) const {
  auto it = std::find_if(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.name == name; });
  if (it == cells_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

std::optional<std::size_t> SubcomplexFamily::part_of_cell(std::size_t cell) const {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (std::binary_search(parts[i].cells.begin(), parts[i].cells.end(), cell)) return i;
  return std::nullopt;
}

std::optional<std::size_t> SubcomplexFamily::part_of_edge(std::size_t edge) const {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (std::binary_search(parts[i].edges.begin(), parts[i].edges.end(), edge)) return i;
  return std::nullopt;
}

void validate_family(const TwoComplex& cx, const SubcomplexFamily& fam) {
  std::vector<int> edge_owner(cx.edge_count(), -1), cell_owner(cx.cell_count(), -1);
  for (std::size_t i = 0; i < fam.parts.size(); ++i) {
    const auto& p = fam.parts[i];
    if (!std::is_sorted(p.edges.begin(), p.edges.end()) || !std::is_sorted(p.cells.begin(), p.cells.end()))
      throw InvalidInput("subcomplex part " + std::to_string(i) + " is not sorted");
    for (auto e : p.edges) {
      if (e >= cx.edge_count()) throw InvalidInput("subcomplex part uses an unknown edge");
      if (edge_owner[e] != -1) throw InvalidInput("edge '" + cx.edge_name(e) + "' lies in two parts");
      edge_owner[e] = static_cast<int>(i);
    }
    for (auto c : p.cells) {
      if (c >= cx.cell_count()) throw InvalidInput("subcomplex part uses an unknown cell");
      if (cell_owner[c] != -1) throw InvalidInput("cell '" + cx.cell(c).name + "' lies in two parts");
      cell_owner[c] = static_cast<int>(i);
    }
  }
  for (std::size_t c = 0; c < cx.cell_count(); ++c) {
    if (cell_owner[c] == -1) continue;
    for (const auto& l : cx.cell(c).boundary.letters)
      if (edge_owner[l.edge] != cell_owner[c])
        throw InvalidInput("cell '" + cx.cell(c).name + "' is not attached inside its part");
  }
}

std::string lot_cell_name(EdgeId e) { return "d_" + std::to_string(e); }

TwoComplex build_complex(const SignedLot& slot) {
  const Lot& lot = slot.lot;
  std::vector<Cell> cells;
  cells.reserve(lot.edge_count());
  for (const auto& e : lot.edges()) {
    // x^s1 z (z y^s2)^-1 = x^s1 z y^-s2 z^-1
    BoundaryWord w{{{e.tail, slot.sign[e.tail]},
                    {e.label, Sign::plus},
                    {e.head, -slot.sign[e.head]},
                    {e.label, Sign::minus}}};
    cells.push_back({lot_cell_name(e.id), std::move(w)});
  }
  return TwoComplex(lot.name(), lot.vertex_names(), std::move(cells));
}

TwoComplex build_complex(const Lot& lot) { return build_complex(SignedLot(lot)); }

SubcomplexFamily derive_subcomplexes(const Lot& lot, std::span<const SubLot> sublots) {
  SubcomplexFamily fam;
  std::uint64_t used_vertices = 0;
  EdgeMask used_edges = 0;
  for (const auto& s : sublots) {
    EdgeMask m = to_mask(s.edges);
    for (EdgeId e : s.edges)
      if (e >= lot.edge_count()) throw InvalidInput("unknown edge id " + std::to_string(e));
    std::uint64_t v = lot.vertices_of(m);
    if ((m & used_edges) || (v & used_vertices)) throw InvalidInput("overlapping sub-LOTs");
    used_edges |= m;
    used_vertices |= v;
    SubcomplexPart part;
    for (VertexId x = 0; x < lot.vertex_count(); ++x)
      if (v & (std::uint64_t{1} << x)) part.edges.push_back(x);
    part.cells = s.edges;
    std::sort(part.cells.begin(), part.cells.end());
    fam.parts.push_back(std::move(part));
  }
  validate_family(build_complex(lot), fam);
  return fam;
}

int exponent_sum(const BoundaryWord& w) {
  int sum = 0;
  for (const auto& l : w.letters) sum += to_int(l.sign);
  return sum;
}

std::vector<bool> is_full(const TwoComplex& cx, const SubcomplexFamily& fam) {
  std::vector<bool> full;
  for (const auto& part : fam.parts) {
    bool ok = true;
    for (std::size_t c = 0; c < cx.cell_count() && ok; ++c) {
      const auto& letters = cx.cell(c).boundary.letters;
      bool inside = std::all_of(letters.begin(), letters.end(), [&](const Letter& l) {
        return std::binary_search(part.edges.begin(), part.edges.end(), l.edge);
      });
      if (inside && !std::binary_search(part.cells.begin(), part.cells.end(), c)) ok = false;
    }
    full.push_back(ok);
  }
  return full;
}

BoundaryWord inverse(const BoundaryWord& w) {
  BoundaryWord out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back({it->edge, -it->sign});
  return out;
}

BoundaryWord canonical_rotation(const BoundaryWord& w) {
  BoundaryWord best = w;
  const std::size_t q = w.size();
  for (std::size_t r = 1; r < q; ++r) {
    BoundaryWord cand;
    for (std::size_t i = 0; i < q; ++i) cand.letters.push_back(w.letters[(i + r) % q]);
    if (cand.letters < best.letters) best = std::move(cand);
  }
  return best;
}

bool cyclic_equal(const BoundaryWord& a, const BoundaryWord& b) { return match_rotation(a, b).has_value(); }

std::optional<std::size_t> match_rotation(const BoundaryWord& w, const BoundaryWord& target) {
  const std::size_t q = w.size();
  if (q != target.size()) return std::nullopt;
  for (std::size_t r = 0; r < q; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < q && ok; ++i) ok = w.letters[i] == target.letters[(i + r) % q];
    if (ok) return r;
  }
  return std::nullopt;
}

TwoComplex parse_complex(std::string_view text) {
  std::string name;
  std::vector<std::string> edges;
  struct PendingCell {
    std::string name;
    std::size_t line;
    std::vector<detail::Token> letters;
    std::vector<std::string> storage;
  };
  std::vector<PendingCell> pending;

  for (const auto& line : detail::tokenize(text)) {
    std::string_view kw = line.tokens[0].text;
    if (kw == "complex") {
      detail::expect_arity(line, 2);
      if (!name.empty()) detail::syntax_error(line, "duplicate 'complex' line");
      name = detail::identifier(line, 1);
    } else if (kw == "edge") {
      detail::expect_arity(line, 2);
      auto e = std::string(detail::identifier(line, 1));
      if (std::find(edges.begin(), edges.end(), e) != edges.end())
        detail::syntax_error(line, line.tokens[1], "duplicate edge '" + e + "'");
      edges.push_back(e);
    } else if (kw == "cell") {
      if (line.tokens.size() < 4 || line.tokens[2].text != "=")
        detail::syntax_error(line, "expected 'cell NAME = LETTER(,LETTER)*'");
      PendingCell c{std::string(detail::identifier(line, 1)), line.number, detail::comma_list(line, 3), {}};
      for (const auto& p : pending)
        if (p.name == c.name) detail::syntax_error(line, line.tokens[1], "duplicate cell '" + c.name + "'");
      for (auto& t : c.letters) {
        std::string_view body = t.text.starts_with('-') ? t.text.substr(1) : t.text;
        if (!detail::is_identifier(body)) detail::syntax_error(line, t, "invalid letter '" + std::string(t.text) + "'");
        c.storage.emplace_back(t.text);
      }
      pending.push_back(std::move(c));
    } else {
      detail::syntax_error(line, line.tokens[0], "unknown keyword '" + std::string(kw) + "'");
    }
  }

  std::vector<Cell> cells;
  for (const auto& p : pending) {
    Cell c{p.name, {}};
    for (std::size_t i = 0; i < p.storage.size(); ++i) {
      std::string_view s = p.storage[i];
      Sign sign = s.starts_with('-') ? Sign::minus : Sign::plus;
      if (sign == Sign::minus) s.remove_prefix(1);
      auto it = std::find(edges.begin(), edges.end(), s);
      if (it == edges.end())
        throw ParseError(ParseError::Kind::unknown_name, p.line, p.letters[i].column,
                         "unknown edge '" + std::string(s) + "'");
      c.boundary.letters.push_back({static_cast<std::size_t>(it - edges.begin()), sign});
    }
    cells.push_back(std::move(c));
  }
  return TwoComplex(std::move(name), std::move(edges), std::move(cells));
}

std::string format_word(const TwoComplex& cx, const BoundaryWord& w) {
  std::string out;
  for (const auto& l : w.letters) {
    if (!out.empty()) out += ' ';
    if (l.sign == Sign::minus) out += '-';
    out += cx.edge_name(l.edge);
  }
  return out;
}

std::string to_text(const TwoComplex& cx) {
  std::ostringstream out;
  if (!cx.name().empty()) out << "complex " << cx.name() << '\n';
  for (const auto& e : cx.edge_names()) out << "edge " << e << '\n';
  for (const auto& c : cx.cells()) {
    out << "cell " << c.name << " = ";
    bool first = true;
    for (const auto& l : c.boundary.letters) {
      if (!first) out << ',';
      first = false;
      if (l.sign == Sign::minus) out << '-';
      out << cx.edge_name(l.edge);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace lotva
