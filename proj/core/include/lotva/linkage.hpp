#pragma once

// Vertex links of one-vertex 2-complexes: lk(L), lk+/lk-, the relative link
// lk(L,K) with its Delta blocks, and forest tests on quotient multigraphs.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lotva/complex.hpp"

namespace lotva {

enum class Polarity : std::uint8_t { plus, minus };

struct EdgeEnd {
  std::size_t edge;
  Polarity polarity;

  // Dense index: 2 * edge + (polarity == minus).
  std::size_t slot() const noexcept { return 2 * edge + (polarity == Polarity::minus ? 1 : 0); }
  static EdgeEnd from_slot(std::size_t s) noexcept {
    return {s / 2, s % 2 ? Polarity::minus : Polarity::plus};
  }
  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

// x+ sits near the start of x, x- near its end.
EdgeEnd initial_end(const Letter& l) noexcept;
EdgeEnd terminal_end(const Letter& l) noexcept;

enum class CornerClass : std::uint8_t { plus_plus, minus_minus, plus_minus };

struct CellPosition {
  std::size_t cell;
  std::size_t position;
  friend bool operator==(const CellPosition&, const CellPosition&) = default;
};

// An unordered node pair with a stable id. For cell corners `first` is the
// terminal end of letter `position` and `second` the initial end of the
// next letter; "forward" traversal goes first -> second.
struct Corner {
  std::size_t id;
  EdgeEnd first;
  EdgeEnd second;
  std::optional<CellPosition> cell;
  std::optional<std::size_t> delta_block;

  CornerClass corner_class() const noexcept;
  bool is_loop() const noexcept { return first == second; }
  bool is_delta() const noexcept { return delta_block.has_value(); }
};

struct DeltaBlock {
  std::size_t part;
  std::vector<EdgeEnd> nodes;
};

struct LinkGraph {
  std::size_t complex_edge_count = 0;
  std::vector<EdgeEnd> nodes;
  std::vector<Corner> corners;
  // Present on relative links (possibly empty when the family is empty).
  std::optional<std::vector<DeltaBlock>> delta_blocks;

  std::size_t slot_count() const noexcept { return 2 * complex_edge_count; }
  std::size_t non_delta_count() const noexcept;
};

struct Traversal {
  std::size_t corner;
  bool forward;
  friend bool operator==(const Traversal&, const Traversal&) = default;
};
using Cycle = std::vector<Traversal>;

LinkGraph build_link(const TwoComplex& cx);
LinkGraph build_relative_link(const TwoComplex& cx, const SubcomplexFamily& fam);

// Full subgraph on one polarity; corner ids are those of `g`.
LinkGraph polarity_subgraph(const LinkGraph& g, Polarity p);
std::pair<LinkGraph, LinkGraph> signed_sublinks(const LinkGraph& g);

// Nodes to contract to a point, and the corners that vanish with them.
struct ContractionBlock {
  std::vector<EdgeEnd> nodes;
  std::vector<std::size_t> corners;
};

struct ForestResult {
  bool is_forest = true;
  std::optional<Cycle> witness;   // a cycle of the quotient, as corners of g
  std::size_t components = 0;     // connected components of the quotient
};

ForestResult relative_forest_check(const LinkGraph& g, std::span<const ContractionBlock> blocks);

// lk^p(K) inside lk(L) for every part of `fam`.
std::vector<ContractionBlock> sublink_blocks(const TwoComplex& cx, const LinkGraph& link, const SubcomplexFamily& fam,
                                             Polarity p);
// Delta^p(K) inside a relative link.
std::vector<ContractionBlock> delta_blocks(const LinkGraph& relative_link, Polarity p);

// lk^p(L) relative to lk^p(K).
ForestResult signed_relative_forest(const TwoComplex& cx, const SubcomplexFamily& fam, Polarity p);

std::string node_name(const TwoComplex& cx, EdgeEnd n);
std::string corner_label(const TwoComplex& cx, const Corner& c);
std::string format_cycle(const TwoComplex& cx, const LinkGraph& g, const Cycle& z);
std::string to_dot(const TwoComplex& cx, const LinkGraph& g);

}  // namespace lotva
