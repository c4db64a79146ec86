#include "lotva/diagrams.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "text.hpp"

namespace lotva {

std::string_view failure_name(DiagramFailure f) {
  switch (f) {
    case DiagramFailure::dangling_reference: return "dangling-reference";
    case DiagramFailure::face_not_closed: return "face-not-closed";
    case DiagramFailure::non_orientable_gluing: return "non-orientable-gluing";
    case DiagramFailure::dangling_dart: return "dangling-dart";
    case DiagramFailure::face_word_mismatch: return "face-word-mismatch";
    case DiagramFailure::isolated_vertex: return "isolated-vertex";
    case DiagramFailure::non_manifold_vertex: return "non-manifold-vertex";
    case DiagramFailure::disconnected: return "disconnected";
  }
  return "unknown";
}

namespace {

std::size_t dart_tail(const SurfaceDiagram& d, std::size_t dart) {
  const auto& e = d.edges[dart / 2];
  return dart % 2 ? e.head : e.tail;
}

std::size_t dart_head(const SurfaceDiagram& d, std::size_t dart) {
  const auto& e = d.edges[dart / 2];
  return dart % 2 ? e.tail : e.head;
}

Letter dart_image(const SurfaceDiagram& d, std::size_t dart) {
  const auto& e = d.edges[dart / 2];
  return {e.image, dart % 2 ? -e.sign : e.sign};
}

DiagramReport fail(DiagramFailure f, std::string message) {
  DiagramReport r;
  r.failure = f;
  r.message = std::string(failure_name(f)) + ": " + std::move(message);
  return r;
}

// Where each dart sits: (face, index in boundary). Only meaningful on
// diagrams that passed validation.
struct DartIndex {
  std::vector<FaceCorner> at;

  explicit DartIndex(const SurfaceDiagram& d) : at(2 * d.edges.size()) {
    for (std::size_t f = 0; f < d.faces.size(); ++f)
      for (std::size_t i = 0; i < d.faces[f].boundary.size(); ++i) at[d.faces[f].boundary[i].dart()] = {f, i};
  }

  std::size_t next(const SurfaceDiagram& d, std::size_t dart) const {
    auto [f, i] = at[dart];
    const auto& b = d.faces[f].boundary;
    return b[(i + 1) % b.size()].dart();
  }
  // Vertex rotation: the next dart leaving the tail of `dart`.
  std::size_t rotate(const SurfaceDiagram& d, std::size_t dart) const { return next(d, dart ^ 1); }
};

std::vector<std::size_t> cell_offsets(const TwoComplex& cx) {
  std::vector<std::size_t> off(cx.cell_count() + 1, 0);
  for (std::size_t c = 0; c < cx.cell_count(); ++c) off[c + 1] = off[c] + cx.cell(c).boundary.size();
  return off;
}

// The cell corner a face corner maps to, as a traversal of the link corner.
Traversal map_face_corner(const SurfaceDiagram& d, const std::vector<std::size_t>& offsets, std::size_t rotation,
                          FaceCorner fc) {
  const Face& face = d.faces[fc.face];
  const std::size_t q = face.boundary.size();
  std::size_t shifted = (fc.index + rotation) % q;
  if (face.orientation == Sign::plus) return {offsets[face.cell] + shifted, true};
  // Face dart i reads the inverse of cell letter q - 1 - shifted; the corner
  // after it sits before that letter, walked backwards.
  std::size_t letter = q - 1 - shifted;
  return {offsets[face.cell] + (letter + q - 1) % q, false};
}

}  // namespace

DiagramReport validate_diagram(const SurfaceDiagram& d, const TwoComplex& cx) {
  const std::size_t V = d.vertices.size(), E = d.edges.size(), F = d.faces.size();
  for (const auto& e : d.edges) {
    if (e.tail >= V || e.head >= V) return fail(DiagramFailure::dangling_reference, "edge '" + e.name + "' has an unknown endpoint");
    if (e.image >= cx.edge_count()) return fail(DiagramFailure::dangling_reference, "edge '" + e.name + "' maps to an unknown complex edge");
  }
  for (const auto& f : d.faces) {
    if (f.cell >= cx.cell_count()) return fail(DiagramFailure::dangling_reference, "face '" + f.name + "' maps to an unknown cell");
    if (f.boundary.empty()) return fail(DiagramFailure::dangling_reference, "face '" + f.name + "' has an empty boundary");
    for (const auto& s : f.boundary)
      if (s.edge >= E) return fail(DiagramFailure::dangling_reference, "face '" + f.name + "' uses an unknown edge");
  }

  for (const auto& f : d.faces) {
    const auto& b = f.boundary;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (dart_head(d, b[i].dart()) != dart_tail(d, b[(i + 1) % b.size()].dart()))
        return fail(DiagramFailure::face_not_closed,
                    "face '" + f.name + "' breaks after step " + std::to_string(i) + " (edge '" + d.edges[b[i].edge].name + "')");
    }
  }

  std::vector<int> uses(2 * E, 0);
  for (const auto& f : d.faces)
    for (const auto& s : f.boundary)
      if (++uses[s.dart()] > 1)
        return fail(DiagramFailure::non_orientable_gluing,
                    "edge '" + d.edges[s.edge].name + "' is traversed twice in the same direction");
  for (std::size_t dart = 0; dart < 2 * E; ++dart)
    if (!uses[dart])
      return fail(DiagramFailure::dangling_dart, std::string("edge '") + d.edges[dart / 2].name + "' is never traversed " +
                                                     (dart % 2 ? "backwards" : "forwards"));

  DiagramReport report;
  for (const auto& f : d.faces) {
    BoundaryWord word;
    for (const auto& s : f.boundary) word.letters.push_back(dart_image(d, s.dart()));
    const BoundaryWord& cell_word = cx.cell(f.cell).boundary;
    BoundaryWord target = f.orientation == Sign::plus ? cell_word : inverse(cell_word);
    auto r = match_rotation(word, target);
    if (!r)
      return fail(DiagramFailure::face_word_mismatch, "face '" + f.name + "' reads " + format_word(cx, word) +
                                                          " which is not a rotation of " + format_word(cx, target));
    report.rotations.push_back(*r);
  }

  std::vector<std::vector<std::size_t>> leaving(V);
  for (std::size_t dart = 0; dart < 2 * E; ++dart) leaving[dart_tail(d, dart)].push_back(dart);
  DartIndex index(d);
  for (std::size_t v = 0; v < V; ++v) {
    if (leaving[v].empty()) return fail(DiagramFailure::isolated_vertex, "vertex '" + d.vertices[v] + "' has no edges");
    std::size_t orbit = 0;
    std::size_t dart = leaving[v].front();
    do {
      ++orbit;
      dart = index.rotate(d, dart);
    } while (dart != leaving[v].front() && orbit <= leaving[v].size());
    if (orbit != leaving[v].size())
      return fail(DiagramFailure::non_manifold_vertex,
                  "the faces around vertex '" + d.vertices[v] + "' form more than one disc");
  }

  std::vector<std::size_t> comp(V);
  std::iota(comp.begin(), comp.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (comp[a] != a) a = comp[a] = comp[comp[a]];
    return a;
  };
  for (const auto& e : d.edges) comp[find(e.tail)] = find(e.head);
  for (std::size_t v = 1; v < V; ++v)
    if (find(v) != find(0)) return fail(DiagramFailure::disconnected, "vertex '" + d.vertices[v] + "' is not reachable");
  if (V == 0) return fail(DiagramFailure::isolated_vertex, "diagram has no vertices");

  report.valid = true;
  report.chi = static_cast<long>(V) - static_cast<long>(E) + static_cast<long>(F);
  report.genus = (2 - report.chi) / 2;
  report.sphere = report.chi == 2;
  return report;
}

DiagramReport require_valid(const SurfaceDiagram& d, const TwoComplex& cx) {
  DiagramReport r = validate_diagram(d, cx);
  if (!r.valid) throw InvalidInput("invalid diagram: " + r.message);
  return r;
}

VertexLinkCycle vertex_link_cycle(const SurfaceDiagram& d, std::size_t v, const TwoComplex& cx) {
  if (v >= d.vertices.size()) throw InvalidInput("no vertex " + std::to_string(v) + " in the diagram");
  DiagramReport report = require_valid(d, cx);
  DartIndex index(d);
  auto offsets = cell_offsets(cx);

  std::size_t start = 2 * d.edges.size();
  for (std::size_t dart = 0; dart < 2 * d.edges.size(); ++dart)
    if (dart_tail(d, dart) == v) {
      start = dart;
      break;
    }

  VertexLinkCycle z{v, {}, {}};
  std::size_t dart = start;
  do {
    // The face corner after the reverse of `dart` ends at v.
    FaceCorner fc = index.at[dart ^ 1];
    z.face_corners.push_back(fc);
    z.corners.push_back(map_face_corner(d, offsets, report.rotations[fc.face], fc));
    dart = index.rotate(d, dart);
  } while (dart != start);
  return z;
}

std::vector<FoldingVertex> find_folding_vertices(const SurfaceDiagram& d, const TwoComplex& cx,
                                                 const SubcomplexFamily* scope) {
  std::vector<FoldingVertex> out;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    VertexLinkCycle z = vertex_link_cycle(d, v, cx);
    bool found = false;
    for (std::size_t i = 0; i < z.corners.size() && !found; ++i) {
      for (std::size_t j = i + 1; j < z.corners.size() && !found; ++j) {
        if (z.corners[i].corner != z.corners[j].corner || z.corners[i].forward == z.corners[j].forward) continue;
        std::size_t fa = z.face_corners[i].face, fb = z.face_corners[j].face;
        if (scope && (scope->part_of_cell(d.faces[fa].cell) || scope->part_of_cell(d.faces[fb].cell))) continue;
        out.push_back({v, fa, fb});
        found = true;
      }
    }
  }
  return out;
}

bool is_vertex_reduced(const SurfaceDiagram& d, const TwoComplex& cx) { return find_folding_vertices(d, cx).empty(); }

ThinResult k_thin_check(const SurfaceDiagram& d, const TwoComplex& cx, const SubcomplexFamily& fam) {
  require_valid(d, cx);
  validate_family(cx, fam);
  std::vector<bool> outside(d.vertices.size(), false);
  for (const auto& f : d.faces) {
    if (fam.part_of_cell(f.cell)) continue;
    for (const auto& s : f.boundary) outside[dart_head(d, s.dart())] = true;
  }
  for (std::size_t v = 0; v < d.vertices.size(); ++v)
    if (!outside[v]) return {false, v};
  return {};
}

CurvatureReport curvature_report(const SurfaceDiagram& d, const TwoComplex& cx, const WeightAssignment& w) {
  DiagramReport report = require_valid(d, cx);
  auto offsets = cell_offsets(cx);
  if (w.size() < offsets.back()) throw InvalidInput("weight assignment does not cover the link of the complex");

  CurvatureReport out;
  out.chi = report.chi;
  out.face.assign(d.faces.size(), Rational(0));
  out.vertex.assign(d.vertices.size(), Rational(2));
  for (std::size_t f = 0; f < d.faces.size(); ++f) {
    const auto& b = d.faces[f].boundary;
    Rational sum(0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      Traversal t = map_face_corner(d, offsets, report.rotations[f], {f, i});
      sum += w[t.corner];
      out.vertex[dart_head(d, b[i].dart())] -= w[t.corner];
    }
    out.face[f] = sum - Rational(static_cast<std::int64_t>(b.size()) - 2);
  }
  out.total = Rational(0);
  for (const auto& k : out.face) out.total += k;
  for (const auto& k : out.vertex) out.total += k;
  if (out.total != Rational(2 * out.chi))
    throw InternalError("curvature total " + format_rational(out.total) + " differs from 2 chi = " +
                        std::to_string(2 * out.chi));
  return out;
}

namespace {

// Orientation pulled back from the complex: from -> to.
std::pair<std::size_t, std::size_t> pulled_back(const DiagramEdge& e) {
  return e.sign == Sign::plus ? std::pair{e.tail, e.head} : std::pair{e.head, e.tail};
}

}  // namespace

bool is_sink(const SurfaceDiagram& d, std::size_t v) {
  bool any = false;
  for (const auto& e : d.edges) {
    auto [from, to] = pulled_back(e);
    if (from != v && to != v) continue;
    any = true;
    if (from == v) return false;
  }
  return any;
}

bool is_source(const SurfaceDiagram& d, std::size_t v) {
  bool any = false;
  for (const auto& e : d.edges) {
    auto [from, to] = pulled_back(e);
    if (from != v && to != v) continue;
    any = true;
    if (to == v) return false;
  }
  return any;
}

SinkSource find_sink_source(const SurfaceDiagram& d, const TwoComplex& cx) {
  require_valid(d, cx);
  for (const auto& f : d.faces)
    if (exponent_sum(cx.cell(f.cell).boundary) != 0)
      throw SinkSourceError(SinkSourceError::Kind::exponent_sum,
                            "cell '" + cx.cell(f.cell).name + "' has nonzero exponent sum");
  if (d.vertices.size() == 1)
    throw SinkSourceError(SinkSourceError::Kind::degenerate_single_vertex,
                          "degenerate-single-vertex: every edge both enters and leaves the only vertex");

  const std::size_t V = d.vertices.size();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(V);
  for (const auto& e : d.edges) {
    adj[e.tail].push_back({e.head, to_int(e.sign)});
    adj[e.head].push_back({e.tail, -to_int(e.sign)});
  }
  std::vector<long> h(V, 0);
  std::vector<bool> seen(V, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t u = queue[i];
    for (auto [v, step] : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        h[v] = h[u] + step;
        queue.push_back(v);
      } else if (h[v] != h[u] + step) {
        throw SinkSourceError(SinkSourceError::Kind::height_inconsistent,
                              "heights disagree at vertex '" + d.vertices[v] + "'");
      }
    }
  }

  SinkSource out{0, 0, h};
  for (std::size_t v = 1; v < V; ++v) {
    if (h[v] > h[out.sink]) out.sink = v;
    if (h[v] < h[out.source]) out.source = v;
  }
  if (!is_sink(d, out.sink) || !is_source(d, out.source))
    throw InternalError("extremal heights do not give a sink and a source");
  return out;
}

SurfaceDiagram double_cell_sphere(const TwoComplex& cx, std::size_t cell) {
  const Cell& c = cx.cell(cell);
  const std::size_t q = c.boundary.size();
  SurfaceDiagram d;
  d.name = "double_" + c.name;
  d.complex_name = cx.name();
  for (std::size_t i = 0; i < q; ++i) d.vertices.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < q; ++i) {
    const Letter& l = c.boundary.letters[i];
    d.edges.push_back({"e" + std::to_string(i), i, (i + 1) % q, l.edge, l.sign});
  }
  Face front{"front", cell, Sign::plus, {}};
  Face back{"back", cell, Sign::minus, {}};
  for (std::size_t i = 0; i < q; ++i) {
    front.boundary.push_back({i, Sign::plus});
    back.boundary.push_back({q - 1 - i, Sign::minus});
  }
  d.faces = {std::move(front), std::move(back)};
  return d;
}

namespace {

Sign parse_sign(const detail::Line& line, std::size_t index) {
  std::string_view s = line.tokens.at(index).text;
  if (s == "+") return Sign::plus;
  if (s == "-") return Sign::minus;
  detail::syntax_error(line, line.tokens[index], "expected '+' or '-'");
}

[[noreturn]] void unknown(const detail::Line& line, std::size_t column, const std::string& what) {
  throw ParseError(ParseError::Kind::unknown_name, line.number, column, what);
}

}  // namespace

SurfaceDiagram parse_diagram(std::string_view text, const TwoComplex& cx) {
  SurfaceDiagram d;
  bool header = false;
  std::vector<detail::Line> edge_lines, face_lines;
  for (auto& line : detail::tokenize(text)) {
    std::string_view kw = line.tokens[0].text;
    if (kw == "diagram") {
      if (line.tokens.size() != 4 || line.tokens[2].text != "over")
        detail::syntax_error(line, "expected 'diagram NAME over COMPLEX'");
      if (header) detail::syntax_error(line, "duplicate 'diagram' line");
      header = true;
      d.name = detail::identifier(line, 1);
      d.complex_name = detail::identifier(line, 3);
      if (!cx.name().empty() && d.complex_name != cx.name())
        unknown(line, line.tokens[3].column, "diagram is over '" + d.complex_name + "' but the complex is '" + cx.name() + "'");
    } else if (kw == "vertex") {
      detail::expect_arity(line, 2);
      std::string v(detail::identifier(line, 1));
      if (std::find(d.vertices.begin(), d.vertices.end(), v) != d.vertices.end())
        detail::syntax_error(line, line.tokens[1], "duplicate vertex '" + v + "'");
      d.vertices.push_back(std::move(v));
    } else if (kw == "edge") {
      if (line.tokens.size() != 7 || line.tokens[4].text != "maps")
        detail::syntax_error(line, "expected 'edge NAME TAIL HEAD maps EDGE SIGN'");
      edge_lines.push_back(std::move(line));
    } else if (kw == "face") {
      if (line.tokens.size() < 8 || line.tokens[2].text != "cell" || line.tokens[4].text != "orient" ||
          line.tokens[6].text != "boundary")
        detail::syntax_error(line, "expected 'face NAME cell CELL orient SIGN boundary STEPS'");
      face_lines.push_back(std::move(line));
    } else {
      detail::syntax_error(line, line.tokens[0], "unknown keyword '" + std::string(kw) + "'");
    }
  }

  auto vertex = [&](const detail::Line& line, std::size_t i) {
    auto name = detail::identifier(line, i);
    auto it = std::find(d.vertices.begin(), d.vertices.end(), name);
    if (it == d.vertices.end()) unknown(line, line.tokens[i].column, "unknown vertex '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - d.vertices.begin());
  };
  for (const auto& line : edge_lines) {
    std::string name(detail::identifier(line, 1));
    for (const auto& e : d.edges)
      if (e.name == name) detail::syntax_error(line, line.tokens[1], "duplicate edge '" + name + "'");
    auto image_name = detail::identifier(line, 5);
    auto image = cx.find_edge(image_name);
    if (!image) unknown(line, line.tokens[5].column, "unknown complex edge '" + std::string(image_name) + "'");
    d.edges.push_back({name, vertex(line, 2), vertex(line, 3), *image, parse_sign(line, 6)});
  }
  for (const auto& line : face_lines) {
    Face f;
    f.name = detail::identifier(line, 1);
    for (const auto& g : d.faces)
      if (g.name == f.name) detail::syntax_error(line, line.tokens[1], "duplicate face '" + f.name + "'");
    auto cell_name = detail::identifier(line, 3);
    auto cell = cx.find_cell(cell_name);
    if (!cell) unknown(line, line.tokens[3].column, "unknown cell '" + std::string(cell_name) + "'");
    f.cell = *cell;
    f.orientation = parse_sign(line, 5);
    for (const auto& t : detail::comma_list(line, 7)) {
      std::string_view s = t.text;
      Sign dir = s.starts_with('-') ? Sign::minus : Sign::plus;
      if (dir == Sign::minus) s.remove_prefix(1);
      auto it = std::find_if(d.edges.begin(), d.edges.end(), [&](const DiagramEdge& e) { return e.name == s; });
      if (it == d.edges.end()) unknown(line, t.column, "unknown edge '" + std::string(s) + "'");
      f.boundary.push_back({static_cast<std::size_t>(it - d.edges.begin()), dir});
    }
    d.faces.push_back(std::move(f));
  }
  if (!header) throw ParseError(ParseError::Kind::syntax, 1, 0, "missing 'diagram NAME over COMPLEX' line");
  return d;
}

std::string to_text(const SurfaceDiagram& d, const TwoComplex& cx) {
  std::ostringstream out;
  out << "diagram " << d.name << " over " << d.complex_name << '\n';
  for (const auto& v : d.vertices) out << "vertex " << v << '\n';
  for (const auto& e : d.edges)
    out << "edge " << e.name << ' ' << d.vertices.at(e.tail) << ' ' << d.vertices.at(e.head) << " maps "
        << cx.edge_name(e.image) << ' ' << sign_char(e.sign) << '\n';
  for (const auto& f : d.faces) {
    out << "face " << f.name << " cell " << cx.cell(f.cell).name << " orient " << sign_char(f.orientation)
        << " boundary ";
    for (std::size_t i = 0; i < f.boundary.size(); ++i) {
      if (i) out << ',';
      if (f.boundary[i].direction == Sign::minus) out << '-';
      out << d.edges.at(f.boundary[i].edge).name;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace lotva
