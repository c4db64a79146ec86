#pragma once

// Independent brute-force references and random generators for tests.
// Nothing here calls the search routines it is used to check.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lotva/complex.hpp"
#include "lotva/linkage.hpp"
#include "lotva/lot.hpp"
#include "lotva/weights.hpp"

namespace lotva::testing {

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);
Lot fixture_lot(const std::string& name);
TwoComplex fixture_complex(const std::string& name);

// ----- lot oracles

// Union-find connectivity and label closure on an explicit edge subset.
bool brute_is_sublot(const Lot& lot, EdgeMask edges);
std::vector<EdgeMask> brute_sublots(const Lot& lot);
std::vector<EdgeMask> brute_maximal_proper(const Lot& lot);
// Tries every bipartition of the edge set.
bool brute_has_free_decomposition(const Lot& lot);
bool is_valid_free_decomposition(const Lot& lot, const FreeDecomposition& fd);

// ----- cycle oracles

Rational cycle_weight(const WeightAssignment& w, const Cycle& z);
bool is_closed_walk(const LinkGraph& g, const Cycle& z);
// No corner followed by its own reversal, cyclically.
bool is_reduced_cycle(const LinkGraph& g, const Cycle& z);
// No corner appears in both directions anywhere.
bool is_homology_reduced(const Cycle& z);
bool has_non_delta(const LinkGraph& g, const Cycle& z);

// Minimum weight of a reduced closed walk with at most `max_len` corners.
std::optional<Rational> brute_min_reduced_cycle(const LinkGraph& g, const WeightAssignment& w, std::size_t max_len);
// Whether a homology reduced closed walk through a non-Delta corner with
// weight below `bound` and at most `max_len` corners exists. Each loop
// corner is used at most once; dropping a repeated loop keeps a walk closed
// and homology reduced and does not raise its weight.
std::optional<Cycle> brute_homred_below(const LinkGraph& g, const WeightAssignment& w, std::size_t max_len,
                                        const Rational& bound);

// ----- random inputs

using Rng = std::mt19937_64;

Lot random_tree_lot(Rng& rng, std::size_t edges);  // arbitrary labels
std::optional<Lot> random_injective_compressed(Rng& rng, std::size_t edges, int attempts = 200);
TwoComplex random_complex(Rng& rng, std::size_t edges, std::size_t max_corners);
// A random family whose parts use their own edges only.
SubcomplexFamily random_family(Rng& rng, const TwoComplex& cx);
WeightAssignment random_weights(Rng& rng, const LinkGraph& g);

// ----- exhaustive small lots

struct TreeShape {
  std::size_t vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> automorphisms;
};

// One representative per isomorphism class of trees with n vertices.
std::vector<TreeShape> trees_with_vertices(std::size_t n);

// Every injective compressed lot with at most `max_edges` edges, one per
// isomorphism class of labeled oriented trees. Returns the count.
std::size_t for_each_small_lot(std::size_t max_edges, const std::function<void(const Lot&)>& visit);

}  // namespace lotva::testing
