#pragma once

// Labeled oriented graphs and trees: parsing, structural properties,
// sub-LOTs, collapses, complete sets, free decompositions and the two
// orientation/sign transformations.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotva/types.hpp"

namespace lotva {

// Sorted ascending, no duplicates.
using EdgeSet = std::vector<EdgeId>;
using EdgeMask = std::uint64_t;

struct LotEdge {
  EdgeId id;
  VertexId tail;
  VertexId head;
  VertexId label;

  friend bool operator==(const LotEdge&, const LotEdge&) = default;
};

// Labeled oriented graph. Every label is a vertex, ids are dense, no self-loops.
class Log {
 public:
  Log() = default;
  Log(std::string name, std::vector<std::string> vertices, std::vector<LotEdge> edges);

  const std::string& name() const noexcept { return name_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& vertex_names() const noexcept { return vertices_; }
  const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::span<const LotEdge> edges() const noexcept { return edges_; }
  const LotEdge& edge(EdgeId e) const { return edges_.at(e); }

  bool is_tree() const;

  friend bool operator==(const Log&, const Log&) = default;

 protected:
  std::string name_;
  std::vector<std::string> vertices_;
  std::vector<LotEdge> edges_;
};

// A Log whose underlying graph is a tree. Limited to 63 edges so that edge
// and vertex subsets fit in a 64-bit mask.
class Lot : public Log {
 public:
  static constexpr std::size_t max_edges = 63;

  Lot();  // the single vertex "v"
  explicit Lot(Log log);
  Lot(std::string name, std::vector<std::string> vertices, std::vector<LotEdge> edges);

  std::span<const EdgeId> incident(VertexId v) const { return incidence_.at(v); }
  std::size_t degree(VertexId v) const { return incidence_.at(v).size(); }
  VertexId other_end(EdgeId e, VertexId v) const;

  EdgeMask all_edges() const noexcept;
  std::uint64_t vertices_of(EdgeMask edges) const;
  std::uint64_t labels_of(EdgeMask edges) const;
  // Edges on the tree path between two vertices.
  EdgeMask path(VertexId from, VertexId to) const;

 private:
  void index();
  std::vector<std::vector<EdgeId>> incidence_;
};

struct SignedLot {
  Lot lot;
  std::vector<Sign> sign;  // indexed by vertex

  explicit SignedLot(Lot l);
  SignedLot(Lot l, std::vector<Sign> signs);
};

struct SubLot {
  EdgeSet edges;

  friend bool operator==(const SubLot&, const SubLot&) = default;
  // Smaller sets first, then lexicographic.
  friend std::strong_ordering operator<=>(const SubLot& a, const SubLot& b);
};

struct BoundaryWitness {
  EdgeId edge;
  VertexId outer;
  friend bool operator==(const BoundaryWitness&, const BoundaryWitness&) = default;
};

struct PropertyReport {
  bool injective = false;
  bool compressed = false;
  std::optional<BoundaryWitness> boundary_reducible;
  bool reduced = false;
  bool prime = false;
  // A smallest proper sub-LOT when the lot is not prime.
  std::optional<SubLot> proper_sublot_witness;
};

struct SublotEnumeration {
  std::vector<SubLot> all;
  std::vector<SubLot> maximal_proper;
};

struct CollapseResult {
  Lot quotient;
  VertexId collapse_vertex;          // in the input lot
  std::vector<EdgeId> edge_origin;   // quotient edge id -> input edge id
  std::vector<VertexId> vertex_origin;  // quotient vertex id -> input vertex id
};

struct CollapseChain {
  struct Step {
    SubLot sublot;             // edge ids of the quotient current at this step
    VertexId collapse_vertex;  // vertex id of the quotient current at this step
    friend bool operator==(const Step&, const Step&) = default;
  };
  std::vector<Step> steps;
  Lot final_quotient;
};

struct CompleteSet {
  std::vector<SubLot> sublots;  // in the original lot, pairwise vertex-disjoint
  CollapseChain chain;
};

struct FreeDecomposition {
  EdgeSet left;
  EdgeSet right;
  VertexId shared;
  friend bool operator==(const FreeDecomposition&, const FreeDecomposition&) = default;
};

Log parse_log(std::string_view text);
Lot parse_lot(std::string_view text);
std::string to_text(const Log& log);

EdgeMask to_mask(std::span<const EdgeId> edges);
EdgeSet to_edge_set(EdgeMask mask);

bool is_injective(const Log& log);
bool is_compressed(const Log& log);
std::optional<BoundaryWitness> find_boundary_reduction(const Lot& lot);

// Connected edge set with every label among its vertices.
bool is_sublot(const Lot& lot, EdgeMask edges);
bool is_sublot(const Lot& lot, const SubLot& s);

// The sub-tree spanned by `edges` as a stand-alone lot, edges renumbered in
// ascending original id and vertices kept in original order.
struct InducedLot {
  Lot lot;
  std::vector<EdgeId> edge_origin;
  std::vector<VertexId> vertex_origin;
};
InducedLot induced_lot(const Lot& lot, const SubLot& s);

// Removes a leaf edge together with its outer vertex.
InducedLot remove_leaf(const Lot& lot, EdgeId edge, VertexId outer);

PropertyReport check_properties(const Lot& lot);
SubLot sublot_closure(const Lot& lot, EdgeId seed);
SublotEnumeration enumerate_sublots(const Lot& lot);
CollapseResult collapse(const Lot& lot, const SubLot& s);
std::optional<CompleteSet> complete_set_search(const Lot& lot);
std::optional<FreeDecomposition> free_decomposition(const Lot& lot);
Lot reorient(const Lot& lot, std::span<const EdgeId> flipped);
SignedLot sign_change(const Lot& lot, std::span<const VertexId> vertices);

}  // namespace lotva
