#pragma once

// Closed orientable surface diagrams over a 2-complex. Each diagram edge
// carries two darts: 2e runs tail -> head, 2e + 1 runs back.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lotva/complex.hpp"
#include "lotva/error.hpp"
#include "lotva/linkage.hpp"
#include "lotva/weights.hpp"

namespace lotva {

struct DiagramEdge {
  std::string name;
  std::size_t tail;
  std::size_t head;
  std::size_t image;  // complex edge
  Sign sign;          // image of the tail -> head direction
};

struct FaceStep {
  std::size_t edge;
  Sign direction;
  std::size_t dart() const noexcept { return 2 * edge + (direction == Sign::minus ? 1 : 0); }
};

struct Face {
  std::string name;
  std::size_t cell;
  Sign orientation;
  std::vector<FaceStep> boundary;
};

struct SurfaceDiagram {
  std::string name;
  std::string complex_name;
  std::vector<std::string> vertices;
  std::vector<DiagramEdge> edges;
  std::vector<Face> faces;
};

enum class DiagramFailure {
  dangling_reference,
  face_not_closed,
  non_orientable_gluing,
  dangling_dart,
  face_word_mismatch,
  isolated_vertex,
  non_manifold_vertex,
  disconnected,
};
std::string_view failure_name(DiagramFailure f);

struct DiagramReport {
  bool valid = false;
  std::optional<DiagramFailure> failure;
  std::string message;
  long chi = 0;
  long genus = 0;
  bool sphere = false;
  // Per face: smallest r with face word [i] == target word [(i + r) mod q].
  std::vector<std::size_t> rotations;
};

DiagramReport validate_diagram(const SurfaceDiagram& d, const TwoComplex& cx);
// Throws InvalidInput with the failure message unless the diagram is valid.
DiagramReport require_valid(const SurfaceDiagram& d, const TwoComplex& cx);

struct FaceCorner {
  std::size_t face;
  std::size_t index;  // between boundary steps index and index + 1
};

struct VertexLinkCycle {
  std::size_t vertex;
  Cycle corners;  // corner ids of build_link(cx)
  std::vector<FaceCorner> face_corners;
};

VertexLinkCycle vertex_link_cycle(const SurfaceDiagram& d, std::size_t v, const TwoComplex& cx);

struct FoldingVertex {
  std::size_t vertex;
  std::size_t face_a;
  std::size_t face_b;
  friend bool operator==(const FoldingVertex&, const FoldingVertex&) = default;
};

std::vector<FoldingVertex> find_folding_vertices(const SurfaceDiagram& d, const TwoComplex& cx,
                                                 const SubcomplexFamily* scope = nullptr);
bool is_vertex_reduced(const SurfaceDiagram& d, const TwoComplex& cx);

struct ThinResult {
  bool thin = true;
  std::optional<std::size_t> failing_vertex;
};
ThinResult k_thin_check(const SurfaceDiagram& d, const TwoComplex& cx, const SubcomplexFamily& fam);

struct CurvatureReport {
  std::vector<Rational> face;
  std::vector<Rational> vertex;
  Rational total;
  long chi = 0;
};
// `w` is indexed by the corners of build_link(cx).
CurvatureReport curvature_report(const SurfaceDiagram& d, const TwoComplex& cx, const WeightAssignment& w);

class SinkSourceError : public Error {
 public:
  enum class Kind { exponent_sum, degenerate_single_vertex, height_inconsistent };
  SinkSourceError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct SinkSource {
  std::size_t sink;
  std::size_t source;
  std::vector<long> heights;
};

SinkSource find_sink_source(const SurfaceDiagram& d, const TwoComplex& cx);
// Literal predicates on the pulled-back edge orientation.
bool is_sink(const SurfaceDiagram& d, std::size_t v);
bool is_source(const SurfaceDiagram& d, std::size_t v);

SurfaceDiagram double_cell_sphere(const TwoComplex& cx, std::size_t cell);

SurfaceDiagram parse_diagram(std::string_view text, const TwoComplex& cx);
std::string to_text(const SurfaceDiagram& d, const TwoComplex& cx);

}  // namespace lotva
