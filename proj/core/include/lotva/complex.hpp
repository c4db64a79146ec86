#pragma once

// One-vertex combinatorial 2-complexes and the LOT complex.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotva/lot.hpp"
#include "lotva/types.hpp"

namespace lotva {

struct Letter {
  std::size_t edge;
  Sign sign;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// Cyclic word; the stored starting letter is distinguished but equality of
// words as cycles goes through canonical_rotation / cyclic_equal.
struct BoundaryWord {
  std::vector<Letter> letters;

  std::size_t size() const noexcept { return letters.size(); }
  friend bool operator==(const BoundaryWord&, const BoundaryWord&) = default;
};

struct Cell {
  std::string name;
  BoundaryWord boundary;
  friend bool operator==(const Cell&, const Cell&) = default;
};

class TwoComplex {
 public:
  TwoComplex() = default;
  TwoComplex(std::string name, std::vector<std::string> edge_names, std::vector<Cell> cells);

  const std::string& name() const noexcept { return name_; }
  std::size_t edge_count() const noexcept { return edge_names_.size(); }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  const std::vector<std::string>& edge_names() const noexcept { return edge_names_; }
  const std::string& edge_name(std::size_t e) const { return edge_names_.at(e); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t c) const { return cells_.at(c); }
  std::optional<std::size_t> find_edge(std::string_view name) const;
  std::optional<std::size_t> find_cell(std::string_view name) const;

  friend bool operator==(const TwoComplex&, const TwoComplex&) = default;

 private:
  std::string name_;
  std::vector<std::string> edge_names_;
  std::vector<Cell> cells_;
};

// One wedge summand: sorted complex-edge and cell indices.
struct SubcomplexPart {
  std::vector<std::size_t> edges;
  std::vector<std::size_t> cells;
  friend bool operator==(const SubcomplexPart&, const SubcomplexPart&) = default;
};

struct SubcomplexFamily {
  std::vector<SubcomplexPart> parts;

  bool empty() const noexcept { return parts.empty(); }
  // Part index owning the cell, if any.
  std::optional<std::size_t> part_of_cell(std::size_t cell) const;
  std::optional<std::size_t> part_of_edge(std::size_t edge) const;
  friend bool operator==(const SubcomplexFamily&, const SubcomplexFamily&) = default;
};

// Throws InvalidInput unless parts are disjoint subcomplexes of cx.
void validate_family(const TwoComplex& cx, const SubcomplexFamily& fam);

std::string lot_cell_name(EdgeId e);

TwoComplex build_complex(const SignedLot& slot);
TwoComplex build_complex(const Lot& lot);
SubcomplexFamily derive_subcomplexes(const Lot& lot, std::span<const SubLot> sublots);

int exponent_sum(const BoundaryWord& w);
std::vector<bool> is_full(const TwoComplex& cx, const SubcomplexFamily& fam);

BoundaryWord inverse(const BoundaryWord& w);
BoundaryWord canonical_rotation(const BoundaryWord& w);
bool cyclic_equal(const BoundaryWord& a, const BoundaryWord& b);
// Smallest r with w[i] == target[(i + r) mod q] for all i.
std::optional<std::size_t> match_rotation(const BoundaryWord& w, const BoundaryWord& target);

TwoComplex parse_complex(std::string_view text);
std::string to_text(const TwoComplex& cx);
// "a c -b -c" style, the same letter syntax as the file format.
std::string format_word(const TwoComplex& cx, const BoundaryWord& w);

}  // namespace lotva
