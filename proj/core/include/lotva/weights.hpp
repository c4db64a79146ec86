#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotva/linkage.hpp"
#include "lotva/types.hpp"

namespace lotva {

// Nonnegative rational weight per corner id of the link it was made for.
struct WeightAssignment {
  std::vector<Rational> weights;

  const Rational& operator[](std::size_t corner) const { return weights.at(corner); }
  Rational& operator[](std::size_t corner) { return weights.at(corner); }
  std::size_t size() const noexcept { return weights.size(); }
};

struct CycleWeight {
  Rational weight;
  Cycle witness;
};

struct Violation {
  enum class Kind { cell, cycle };
  Kind kind;
  std::optional<std::size_t> cell;
  Cycle cycle;
  Rational weight;
};

struct Verdict {
  bool pass = true;
  std::optional<Violation> violation;
};

// 0 on (++) and (--) corners, 1 on (+-) corners. Delta corners follow the
// same rule, which is exactly the prescribed weighting of a relative link.
WeightAssignment canonical_weights(const LinkGraph& g);

Verdict check_cell_condition(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w,
                             std::span<const std::size_t> excluded_cells = {});

// Minimum over cycles that never step straight back along the corner they
// arrived by. None when the link has no such cycle.
std::optional<CycleWeight> min_weight_reduced_cycle(const LinkGraph& g, const WeightAssignment& w);

// Lightest simple cycle through a non-Delta corner, if it weighs less than 2.
std::optional<CycleWeight> find_homred_violation(const LinkGraph& g, const WeightAssignment& w);

Verdict weight_test(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w);
// `w` is indexed by the corners of build_relative_link(cx, fam).
Verdict relative_weight_test(const TwoComplex& cx, const SubcomplexFamily& fam, const WeightAssignment& w);

// First flip set, counting in binary over the edges outside `fixed`, after
// which both signed links are forests relative to the fixed part.
std::optional<EdgeSet> orientation_search(const Lot& lot, std::span<const SubLot> fixed = {});

// Both signed relative forest conditions for a lot and a family of sub-LOTs.
struct SignedForests {
  ForestResult plus;
  ForestResult minus;
  bool holds() const noexcept { return plus.is_forest && minus.is_forest; }
};
SignedForests signed_forests(const Lot& lot, std::span<const SubLot> sublots);

// `corner CELL POS = P/Q` lines. Every non-Delta corner of `g` must be given;
// Delta corners always take their prescribed weight.
WeightAssignment parse_weights(std::string_view text, const TwoComplex& cx, const LinkGraph& g);
std::string to_text(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w);

std::string format_rational(const Rational& r);

}  // namespace lotva
