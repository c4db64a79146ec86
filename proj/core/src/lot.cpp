#include "lotva/lot.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lotva/error.hpp"
#include "text.hpp"

namespace lotva {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

template <class F>
void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask) {
    f(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
}

}  // namespace

// ---------------------------------------------------------------- Log / Lot

Log::Log(std::string name, std::vector<std::string> vertices, std::vector<LotEdge> edges)
    : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::set<std::string_view> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) throw InvalidInput("duplicate vertex '" + v + "'");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const LotEdge& e = edges_[i];
    if (e.id != i) throw InvalidInput("edge ids must be dense and in order");
    if (e.tail >= vertices_.size() || e.head >= vertices_.size() || e.label >= vertices_.size())
      throw InvalidInput("edge " + std::to_string(i) + " refers to an unknown vertex");
    if (e.tail == e.head) throw InvalidInput("edge " + std::to_string(i) + " is a self-loop");
  }
}

std::optional<VertexId> Log::find_vertex(std::string_view name) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

bool Log::is_tree() const {
  if (vertices_.empty() || edges_.size() + 1 != vertices_.size()) return false;
  std::vector<VertexId> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges_) {
    auto a = find(e.tail), b = find(e.head);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

Lot::Lot() : Lot(Log("", {"v"}, {})) {}

Lot::Lot(Log log) : Log(std::move(log)) {
  if (!is_tree()) throw InvalidInput("'" + name_ + "' is not a tree");
  if (edges_.size() > max_edges) throw InvalidInput("lots are limited to " + std::to_string(max_edges) + " edges");
  index();
}

Lot::Lot(std::string name, std::vector<std::string> vertices, std::vector<LotEdge> edges)
    : Lot(Log(std::move(name), std::move(vertices), std::move(edges))) {}

void Lot::index() {
  incidence_.assign(vertices_.size(), {});
  for (const auto& e : edges_) {
    incidence_[e.tail].push_back(e.id);
    incidence_[e.head].push_back(e.id);
  }
}

VertexId Lot::other_end(EdgeId e, VertexId v) const {
  const LotEdge& ed = edges_.at(e);
  return ed.tail == v ? ed.head : ed.tail;
}

EdgeMask Lot::all_edges() const noexcept {
  return edges_.size() == 64 ? ~EdgeMask{0} : bit(edges_.size()) - 1;
}

std::uint64_t Lot::vertices_of(EdgeMask edges) const {
  std::uint64_t out = 0;
  for_each_bit(edges, [&](std::size_t e) { out |= bit(edges_[e].tail) | bit(edges_[e].head); });
  return out;
}

std::uint64_t Lot::labels_of(EdgeMask edges) const {
  std::uint64_t out = 0;
  for_each_bit(edges, [&](std::size_t e) { out |= bit(edges_[e].label); });
  return out;
}

EdgeMask Lot::path(VertexId from, VertexId to) const {
  std::vector<EdgeId> via(vertices_.size(), edges_.size());
  std::vector<bool> seen(vertices_.size(), false);
  std::vector<VertexId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (v == to) break;
    for (EdgeId e : incidence_[v]) {
      VertexId w = other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        via[w] = e;
        stack.push_back(w);
      }
    }
  }
  EdgeMask out = 0;
  for (VertexId v = to; v != from; v = other_end(via[v], v)) out |= bit(via[v]);
  return out;
}

SignedLot::SignedLot(Lot l) : lot(std::move(l)), sign(lot.vertex_count(), Sign::plus) {}

SignedLot::SignedLot(Lot l, std::vector<Sign> signs) : lot(std::move(l)), sign(std::move(signs)) {
  if (sign.size() != lot.vertex_count()) throw InvalidInput("sign map must be total on the vertices");
}

std::strong_ordering operator<=>(const SubLot& a, const SubLot& b) {
  if (auto c = a.edges.size() <=> b.edges.size(); c != 0) return c;
  return a.edges <=> b.edges;
}

EdgeMask to_mask(std::span<const EdgeId> edges) {
  EdgeMask m = 0;
  for (EdgeId e : edges) {
    if (e >= 64) throw InvalidInput("edge id " + std::to_string(e) + " out of range");
    m |= bit(e);
  }
  return m;
}

EdgeSet to_edge_set(EdgeMask mask) {
  EdgeSet out;
  for_each_bit(mask, [&](std::size_t e) { out.push_back(e); });
  return out;
}

// ---------------------------------------------------------------- parsing

Log parse_log(std::string_view text) {
  using detail::Line;
  std::string name;
  std::vector<std::string> vertices;
  std::map<std::string, VertexId, std::less<>> index;
  struct PendingEdge {
    VertexId tail, head;
    std::string label;
    std::size_t line, column;
  };
  std::vector<PendingEdge> pending;
  std::set<std::pair<VertexId, VertexId>> endpoint_pairs;

  auto intern = [&](std::string_view v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    vertices.emplace_back(v);
    return index.emplace(std::string(v), vertices.size() - 1).first->second;
  };

  for (const Line& line : detail::tokenize(text)) {
    std::string_view kw = line.tokens[0].text;
    if (kw == "lot") {
      detail::expect_arity(line, 2);
      if (!name.empty()) detail::syntax_error(line, "duplicate 'lot' line");
      name = detail::identifier(line, 1);
    } else if (kw == "vertex") {
      detail::expect_arity(line, 2);
      intern(detail::identifier(line, 1));
    } else if (kw == "edge") {
      detail::expect_arity(line, 4);
      auto t = detail::identifier(line, 1), h = detail::identifier(line, 2), l = detail::identifier(line, 3);
      if (t == h)
        throw ParseError(ParseError::Kind::self_loop, line.number, line.tokens[1].column,
                         "edge '" + std::string(t) + " " + std::string(h) + "' is a self-loop");
      VertexId tail = intern(t), head = intern(h);
      if (!endpoint_pairs.insert(std::minmax(tail, head)).second)
        throw ParseError(ParseError::Kind::duplicate_edge, line.number, line.tokens[0].column,
                         "duplicate edge between '" + std::string(t) + "' and '" + std::string(h) + "'");
      pending.push_back({tail, head, std::string(l), line.number, line.tokens[3].column});
    } else {
      detail::syntax_error(line, line.tokens[0], "unknown keyword '" + std::string(kw) + "'");
    }
  }

  std::vector<LotEdge> edges;
  for (const auto& p : pending) {
    auto it = index.find(p.label);
    if (it == index.end())
      throw ParseError(ParseError::Kind::unknown_vertex, p.line, p.column, "label '" + p.label + "' is not a vertex");
    edges.push_back({edges.size(), p.tail, p.head, it->second});
  }
  return Log(std::move(name), std::move(vertices), std::move(edges));
}

Lot parse_lot(std::string_view text) { return Lot(parse_log(text)); }

std::string to_text(const Log& log) {
  std::ostringstream out;
  if (!log.name().empty()) out << "lot " << log.name() << '\n';
  for (const auto& v : log.vertex_names()) out << "vertex " << v << '\n';
  for (const auto& e : log.edges())
    out << "edge " << log.vertex_name(e.tail) << ' ' << log.vertex_name(e.head) << ' ' << log.vertex_name(e.label)
        << '\n';
  return out.str();
}

// ---------------------------------------------------------------- properties

bool is_injective(const Log& log) {
  std::vector<int> uses(log.vertex_count(), 0);
  for (const auto& e : log.edges())
    if (++uses[e.label] > 1) return false;
  return true;
}

bool is_compressed(const Log& log) {
  return std::none_of(log.edges().begin(), log.edges().end(),
                      [](const LotEdge& e) { return e.label == e.tail || e.label == e.head; });
}

std::optional<BoundaryWitness> find_boundary_reduction(const Lot& lot) {
  std::uint64_t labels = lot.labels_of(lot.all_edges());
  for (VertexId v = 0; v < lot.vertex_count(); ++v)
    if (lot.degree(v) == 1 && !(labels & bit(v))) return BoundaryWitness{lot.incident(v)[0], v};
  return std::nullopt;
}

bool is_sublot(const Lot& lot, EdgeMask edges) {
  if (edges == 0 || (edges & ~lot.all_edges())) return false;
  std::uint64_t verts = lot.vertices_of(edges);
  // An edge subset of a tree is connected iff it has one more vertex than edges.
  if (std::popcount(verts) != std::popcount(edges) + 1) return false;
  return (lot.labels_of(edges) & ~verts) == 0;
}

bool is_sublot(const Lot& lot, const SubLot& s) {
  if (!std::is_sorted(s.edges.begin(), s.edges.end()) ||
      std::adjacent_find(s.edges.begin(), s.edges.end()) != s.edges.end())
    return false;
  for (EdgeId e : s.edges)
    if (e >= lot.edge_count()) return false;
  return is_sublot(lot, to_mask(s.edges));
}

InducedLot induced_lot(const Lot& lot, const SubLot& s) {
  EdgeMask mask = to_mask(s.edges);
  std::uint64_t verts = lot.vertices_of(mask);
  InducedLot out;
  std::vector<VertexId> remap(lot.vertex_count(), 0);
  std::vector<std::string> names;
  for (VertexId v = 0; v < lot.vertex_count(); ++v) {
    if (verts & bit(v)) {
      remap[v] = names.size();
      names.push_back(lot.vertex_name(v));
      out.vertex_origin.push_back(v);
    }
  }
  std::vector<LotEdge> edges;
  for (EdgeId e : s.edges) {
    const LotEdge& ed = lot.edge(e);
    if (!(verts & bit(ed.label))) throw PreconditionError("edge set is not closed under labels");
    edges.push_back({edges.size(), remap[ed.tail], remap[ed.head], remap[ed.label]});
    out.edge_origin.push_back(e);
  }
  out.lot = Lot(lot.name(), std::move(names), std::move(edges));
  return out;
}

InducedLot remove_leaf(const Lot& lot, EdgeId edge, VertexId outer) {
  if (edge >= lot.edge_count() || outer >= lot.vertex_count() || lot.degree(outer) != 1 ||
      lot.incident(outer)[0] != edge)
    throw PreconditionError("not a leaf edge at the given vertex");
  if (lot.labels_of(lot.all_edges()) & bit(outer))
    throw PreconditionError("vertex '" + lot.vertex_name(outer) + "' occurs as a label");
  InducedLot out;
  std::vector<std::string> names;
  std::vector<VertexId> remap(lot.vertex_count(), 0);
  for (VertexId v = 0; v < lot.vertex_count(); ++v) {
    if (v == outer) continue;
    remap[v] = names.size();
    names.push_back(lot.vertex_name(v));
    out.vertex_origin.push_back(v);
  }
  std::vector<LotEdge> edges;
  for (const auto& e : lot.edges()) {
    if (e.id == edge) continue;
    edges.push_back({edges.size(), remap[e.tail], remap[e.head], remap[e.label]});
    out.edge_origin.push_back(e.id);
  }
  out.lot = Lot(lot.name(), std::move(names), std::move(edges));
  return out;
}

PropertyReport check_properties(const Lot& lot) {
  PropertyReport r;
  r.injective = is_injective(lot);
  r.compressed = is_compressed(lot);
  r.boundary_reducible = find_boundary_reduction(lot);
  r.reduced = r.compressed && !r.boundary_reducible;
  auto subs = enumerate_sublots(lot);
  for (const auto& s : subs.all) {
    if (s.edges.size() < lot.edge_count()) {
      r.proper_sublot_witness = s;
      break;
    }
  }
  r.prime = !r.proper_sublot_witness;
  return r;
}

// ---------------------------------------------------------------- sub-LOTs

SubLot sublot_closure(const Lot& lot, EdgeId seed) {
  if (seed >= lot.edge_count()) throw PreconditionError("unknown edge id " + std::to_string(seed));
  EdgeMask mask = bit(seed);
  for (;;) {
    std::uint64_t verts = lot.vertices_of(mask);
    std::uint64_t missing = lot.labels_of(mask) & ~verts;
    if (!missing) break;
    auto z = static_cast<VertexId>(std::countr_zero(missing));
    auto anchor = static_cast<VertexId>(std::countr_zero(verts));
    mask |= lot.path(z, anchor);
  }
  return SubLot{to_edge_set(mask)};
}

SublotEnumeration enumerate_sublots(const Lot& lot) {
  SublotEnumeration out;
  const std::size_t n = lot.edge_count();
  if (n == 0) return out;

  std::vector<EdgeMask> closure(n);
  for (EdgeId e = 0; e < n; ++e) closure[e] = to_mask(sublot_closure(lot, e).edges);

  // Every sub-LOT is a connected union of edge closures; grow from single
  // closures by absorbing the closure of an adjacent edge.
  std::set<EdgeMask> found(closure.begin(), closure.end());
  std::vector<EdgeMask> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    EdgeMask s = frontier.back();
    frontier.pop_back();
    std::uint64_t verts = lot.vertices_of(s);
    for (EdgeId e = 0; e < n; ++e) {
      if (s & bit(e)) continue;
      const LotEdge& ed = lot.edge(e);
      if (!(verts & (bit(ed.tail) | bit(ed.head)))) continue;
      EdgeMask grown = s | closure[e];
      if (found.insert(grown).second) frontier.push_back(grown);
    }
  }

  for (EdgeMask m : found) out.all.push_back(SubLot{to_edge_set(m)});
  std::sort(out.all.begin(), out.all.end());

  const EdgeMask full = lot.all_edges();
  std::vector<EdgeMask> proper;
  for (EdgeMask m : found)
    if (m != full) proper.push_back(m);
  for (const auto& s : out.all) {
    EdgeMask m = to_mask(s.edges);
    if (m == full) continue;
    bool maximal = std::none_of(proper.begin(), proper.end(), [&](EdgeMask o) { return o != m && (o & m) == m; });
    if (maximal) out.maximal_proper.push_back(s);
  }
  return out;
}

CollapseResult collapse(const Lot& lot, const SubLot& s) {
  if (!is_sublot(lot, s)) throw PreconditionError("not a sub-LOT");
  EdgeMask inside = to_mask(s.edges);
  std::uint64_t verts = lot.vertices_of(inside);

  std::uint64_t inner_labels = 0;
  for (EdgeId e : s.edges) {
    std::uint64_t b = bit(lot.edge(e).label);
    if (inner_labels & b) throw PreconditionError("sub-LOT is not injective: no unique collapse vertex");
    inner_labels |= b;
  }
  std::uint64_t free = verts & ~inner_labels;
  if (std::popcount(free) != 1) throw PreconditionError("sub-LOT has no unique collapse vertex");
  auto x = static_cast<VertexId>(std::countr_zero(free));

  CollapseResult out;
  out.collapse_vertex = x;
  std::vector<VertexId> remap(lot.vertex_count(), 0);
  std::vector<std::string> names;
  for (VertexId v = 0; v < lot.vertex_count(); ++v) {
    if ((verts & bit(v)) && v != x) continue;
    remap[v] = names.size();
    names.push_back(lot.vertex_name(v));
    out.vertex_origin.push_back(v);
  }
  auto image = [&](VertexId v) { return (verts & bit(v)) ? remap[x] : remap[v]; };

  std::vector<LotEdge> edges;
  for (const auto& e : lot.edges()) {
    if (inside & bit(e.id)) continue;
    if ((verts & bit(e.label)) && e.label != x)
      throw PreconditionError("label '" + lot.vertex_name(e.label) +
                              "' is used inside and outside the sub-LOT: input is not injective");
    edges.push_back({edges.size(), image(e.tail), image(e.head), image(e.label)});
    out.edge_origin.push_back(e.id);
  }
  out.quotient = Lot(lot.name(), std::move(names), std::move(edges));
  return out;
}

namespace {

struct ChainSearch {
  const Lot& original;
  std::vector<CollapseChain::Step> steps;
  std::vector<SubLot> preimages;

  std::optional<CompleteSet> run(const Lot& current, const std::vector<EdgeId>& origin) {
    auto subs = enumerate_sublots(current);
    if (subs.maximal_proper.empty()) {
      if (current.edge_count() >= 1 && is_compressed(current) && is_injective(current))
        return CompleteSet{preimages, CollapseChain{steps, current}};
      return std::nullopt;
    }
    for (const auto& m : subs.maximal_proper) {
      CollapseResult c = collapse(current, m);
      EdgeSet pre;
      for (EdgeId e : m.edges) pre.push_back(origin[e]);
      std::sort(pre.begin(), pre.end());
      std::vector<EdgeId> next_origin;
      for (EdgeId e : c.edge_origin) next_origin.push_back(origin[e]);

      steps.push_back({m, c.collapse_vertex});
      preimages.push_back(SubLot{std::move(pre)});
      if (auto found = run(c.quotient, next_origin)) return found;
      steps.pop_back();
      preimages.pop_back();
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<CompleteSet> complete_set_search(const Lot& lot) {
  if (!is_injective(lot) || !is_compressed(lot))
    throw PreconditionError("complete-set search needs an injective compressed lot");
  if (check_properties(lot).prime) throw PreconditionError("complete-set search needs a non-prime lot");

  std::vector<EdgeId> origin(lot.edge_count());
  std::iota(origin.begin(), origin.end(), EdgeId{0});
  ChainSearch search{lot, {}, {}};
  auto found = search.run(lot, origin);
  if (!found) return std::nullopt;

  std::uint64_t used = 0;
  for (const auto& s : found->sublots) {
    std::uint64_t v = lot.vertices_of(to_mask(s.edges));
    if (used & v) throw InternalError("complete set is not vertex-disjoint");
    used |= v;
  }
  return found;
}

std::optional<FreeDecomposition> free_decomposition(const Lot& lot) {
  for (VertexId v = 0; v < lot.vertex_count(); ++v) {
    auto inc = lot.incident(v);
    const std::size_t k = inc.size();
    if (k < 2) continue;

    // Branch i: the edges reached from v through its i-th incident edge.
    std::vector<EdgeMask> branch(k, 0);
    std::vector<std::uint64_t> branch_verts(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<VertexId> stack{lot.other_end(inc[i], v)};
      branch[i] = bit(inc[i]);
      while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        for (EdgeId e : lot.incident(u)) {
          if (branch[i] & bit(e)) continue;
          branch[i] |= bit(e);
          stack.push_back(lot.other_end(e, u));
        }
      }
      branch_verts[i] = lot.vertices_of(branch[i]) & ~bit(v);
    }

    // Branches must stay together when one carries a label living in the
    // other. A bipartition into sub-LOTs exists iff this relation has more
    // than one component; the left half is the component of branch 0, which
    // is also the first valid bipartition in increasing branch-mask order.
    std::vector<std::size_t> comp(k);
    std::iota(comp.begin(), comp.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
      while (comp[a] != a) a = comp[a] = comp[comp[a]];
      return a;
    };
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t labels = lot.labels_of(branch[i]) & ~bit(v);
      for (std::size_t j = 0; j < k; ++j)
        if (j != i && (labels & branch_verts[j])) comp[find(i)] = find(j);
    }
    EdgeMask left = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (find(i) == find(0)) left |= branch[i];
    if (left == lot.all_edges()) continue;
    EdgeMask right = lot.all_edges() & ~left;
    if (!is_sublot(lot, left) || !is_sublot(lot, right)) throw InternalError("free decomposition halves are not sub-LOTs");
    return FreeDecomposition{to_edge_set(left), to_edge_set(right), v};
  }
  return std::nullopt;
}

Lot reorient(const Lot& lot, std::span<const EdgeId> flipped) {
  std::vector<LotEdge> edges(lot.edges().begin(), lot.edges().end());
  EdgeMask mask = 0;
  for (EdgeId e : flipped) {
    if (e >= edges.size()) throw PreconditionError("unknown edge id " + std::to_string(e));
    mask |= bit(e);
  }
  for_each_bit(mask, [&](std::size_t e) { std::swap(edges[e].tail, edges[e].head); });
  return Lot(lot.name(), lot.vertex_names(), std::move(edges));
}

SignedLot sign_change(const Lot& lot, std::span<const VertexId> vertices) {
  std::vector<Sign> signs(lot.vertex_count(), Sign::plus);
  for (VertexId v : vertices) {
    if (v >= signs.size()) throw PreconditionError("unknown vertex id " + std::to_string(v));
    signs[v] = Sign::minus;
  }
  return SignedLot(lot, std::move(signs));
}

}  // namespace lotva
