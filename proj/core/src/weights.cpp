#include "lotva/weights.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "lotva/error.hpp"
#include "text.hpp"

namespace lotva {

namespace {

Rational class_weight(const Corner& c) { return c.corner_class() == CornerClass::plus_minus ? 1 : 0; }

void require_cover(const LinkGraph& g, const WeightAssignment& w) {
  for (const auto& c : g.corners) {
    if (c.id >= w.size()) throw InvalidInput("weight assignment does not cover corner " + std::to_string(c.id));
    if (w[c.id] < 0) throw PreconditionError("negative weight on corner " + std::to_string(c.id));
  }
}

// Directed copies of the corners: dart 2k runs first -> second along
// g.corners[k], dart 2k + 1 the other way.
struct DartGraph {
  std::vector<std::size_t> tail, head;
  std::vector<Rational> weight;
  std::vector<std::vector<std::size_t>> out;  // by node slot

  DartGraph(const LinkGraph& g, const WeightAssignment& w) : out(g.slot_count()) {
    for (const auto& c : g.corners) {
      for (bool fwd : {true, false}) {
        std::size_t d = tail.size();
        tail.push_back((fwd ? c.first : c.second).slot());
        head.push_back((fwd ? c.second : c.first).slot());
        weight.push_back(w[c.id]);
        out[tail.back()].push_back(d);
      }
    }
  }
};

using Entry = std::pair<Rational, std::size_t>;
struct Later {
  bool operator()(const Entry& a, const Entry& b) const {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  }
};

}  // namespace

WeightAssignment canonical_weights(const LinkGraph& g) {
  WeightAssignment w;
  for (const auto& c : g.corners) {
    if (c.id >= w.weights.size()) w.weights.resize(c.id + 1, Rational(0));
    w.weights[c.id] = class_weight(c);
  }
  return w;
}

Verdict check_cell_condition(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w,
                             std::span<const std::size_t> excluded_cells) {
  require_cover(g, w);
  std::vector<Rational> sum(cx.cell_count(), Rational(0));
  std::vector<bool> present(cx.cell_count(), false);
  for (const auto& c : g.corners) {
    if (!c.cell) continue;
    sum.at(c.cell->cell) += w[c.id];
    present[c.cell->cell] = true;
  }
  for (std::size_t i = 0; i < cx.cell_count(); ++i) {
    if (!present[i] || std::find(excluded_cells.begin(), excluded_cells.end(), i) != excluded_cells.end()) continue;
    auto q = static_cast<std::int64_t>(cx.cell(i).boundary.size());
    if (sum[i] > Rational(q - 2)) return {false, Violation{Violation::Kind::cell, i, {}, sum[i]}};
  }
  return {};
}

std::optional<CycleWeight> min_weight_reduced_cycle(const LinkGraph& g, const WeightAssignment& w) {
  require_cover(g, w);
  DartGraph dg(g, w);
  const std::size_t n = dg.tail.size();
  std::optional<CycleWeight> best;

  std::vector<Rational> dist(n);
  std::vector<bool> reached(n), settled(n);
  std::vector<std::size_t> parent(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(reached.begin(), reached.end(), false);
    std::fill(settled.begin(), settled.end(), false);
    std::priority_queue<Entry, std::vector<Entry>, Later> pq;
    dist[s] = dg.weight[s];
    reached[s] = true;
    parent[s] = s;
    pq.push({dist[s], s});

    std::optional<std::size_t> closer;
    while (!pq.empty()) {
      auto [d_weight, d] = pq.top();
      pq.pop();
      if (settled[d]) continue;
      settled[d] = true;
      // Darts settle in weight order, so the first legal closer is the best.
      if (best && d_weight >= best->weight) break;
      if (dg.head[d] == dg.tail[s] && s != (d ^ 1)) {
        closer = d;
        break;
      }
      for (std::size_t e : dg.out[dg.head[d]]) {
        if (e == (d ^ 1) || e == s) continue;
        Rational nd = d_weight + dg.weight[e];
        if (!reached[e] || nd < dist[e]) {
          reached[e] = true;
          dist[e] = nd;
          parent[e] = d;
          pq.push({nd, e});
        }
      }
    }
    if (!closer) continue;
    Cycle z;
    for (std::size_t d = *closer;; d = parent[d]) {
      z.push_back({g.corners[d / 2].id, d % 2 == 0});
      if (d == s) break;
    }
    std::reverse(z.begin(), z.end());
    best = CycleWeight{dist[*closer], std::move(z)};
    if (best->weight == 0) break;
  }
  return best;
}

std::optional<CycleWeight> find_homred_violation(const LinkGraph& g, const WeightAssignment& w) {
  if (!g.delta_blocks) throw PreconditionError("find_homred_violation needs a link with Delta decoration");
  require_cover(g, w);
  const std::size_t slots = g.slot_count();
  std::vector<std::vector<std::size_t>> adj(slots);  // corner indices into g.corners
  for (std::size_t k = 0; k < g.corners.size(); ++k) {
    const auto& c = g.corners[k];
    if (c.is_loop()) continue;
    adj[c.first.slot()].push_back(k);
    adj[c.second.slot()].push_back(k);
  }

  std::optional<CycleWeight> best;
  const Rational two(2);
  std::vector<Rational> dist(slots);
  std::vector<bool> reached(slots), settled(slots);
  std::vector<std::size_t> via(slots);
  for (std::size_t k = 0; k < g.corners.size(); ++k) {
    const auto& e = g.corners[k];
    if (e.is_delta()) continue;
    const Rational& we = w[e.id];
    const Rational bound = best ? std::min(best->weight, two) : two;
    if (we >= bound) continue;
    if (e.is_loop()) {
      best = CycleWeight{we, {{e.id, true}}};
      continue;
    }
    // Shortest path second -> first avoiding e.
    const std::size_t src = e.second.slot(), dst = e.first.slot();
    std::fill(reached.begin(), reached.end(), false);
    std::fill(settled.begin(), settled.end(), false);
    std::priority_queue<Entry, std::vector<Entry>, Later> pq;
    dist[src] = 0;
    reached[src] = true;
    pq.push({Rational(0), src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (settled[u]) continue;
      settled[u] = true;
      if (u == dst || we + du >= bound) break;
      for (std::size_t j : adj[u]) {
        if (j == k) continue;
        const auto& c = g.corners[j];
        std::size_t v = c.first.slot() == u ? c.second.slot() : c.first.slot();
        Rational nd = du + w[c.id];
        if (!reached[v] || nd < dist[v]) {
          reached[v] = true;
          dist[v] = nd;
          via[v] = j;
          pq.push({nd, v});
        }
      }
    }
    if (!settled[dst] || we + dist[dst] >= bound) continue;
    Cycle path;
    for (std::size_t v = dst; v != src;) {
      const auto& c = g.corners[via[v]];
      bool fwd = c.second.slot() == v;  // arriving at v along first -> second
      std::size_t u = fwd ? c.first.slot() : c.second.slot();
      path.push_back({c.id, fwd});
      v = u;
    }
    std::reverse(path.begin(), path.end());
    Cycle z{{e.id, true}};
    z.insert(z.end(), path.begin(), path.end());
    best = CycleWeight{we + dist[dst], std::move(z)};
  }
  return best;
}

Verdict weight_test(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w) {
  if (g.delta_blocks && !g.delta_blocks->empty()) throw PreconditionError("weight_test expects an absolute link");
  if (auto v = check_cell_condition(cx, g, w); !v.pass) return v;
  if (auto z = min_weight_reduced_cycle(g, w); z && z->weight < 2)
    return {false, Violation{Violation::Kind::cycle, std::nullopt, std::move(z->witness), z->weight}};
  return {};
}

Verdict relative_weight_test(const TwoComplex& cx, const SubcomplexFamily& fam, const WeightAssignment& w) {
  validate_family(cx, fam);
  std::vector<std::size_t> excluded;
  for (const auto& part : fam.parts) {
    for (std::size_t c : part.cells) {
      if (exponent_sum(cx.cell(c).boundary) != 0)
        throw PreconditionError("cell '" + cx.cell(c).name + "' of the subcomplex has nonzero exponent sum");
      excluded.push_back(c);
    }
  }
  LinkGraph g = build_relative_link(cx, fam);
  require_cover(g, w);
  for (const auto& c : g.corners) {
    if (c.is_delta() && w[c.id] != class_weight(c))
      throw PreconditionError("Delta corner " + std::to_string(c.id) + " must weigh " +
                              format_rational(class_weight(c)));
  }
  if (auto v = check_cell_condition(cx, g, w, excluded); !v.pass) return v;
  if (auto z = find_homred_violation(g, w))
    return {false, Violation{Violation::Kind::cycle, std::nullopt, std::move(z->witness), z->weight}};
  return {};
}

namespace {

// Each LOT cell x -> y labeled z contributes exactly one corner to lk+
// (z+ -- x+) and one to lk- (z- -- y-). With the vertices of each fixed
// sub-LOT merged into one block, both signed links are relative forests iff
// neither edge family closes a cycle.
class FastForests {
 public:
  FastForests(const Lot& lot, std::span<const SubLot> fixed) : lot_(lot), rep_(lot.vertex_count()) {
    std::iota(rep_.begin(), rep_.end(), VertexId{0});
    for (const auto& s : fixed) {
      EdgeMask m = to_mask(s.edges);
      fixed_mask_ |= m;
      std::uint64_t vs = lot.vertices_of(m);
      VertexId r = static_cast<VertexId>(std::countr_zero(vs));
      for (VertexId v = 0; v < lot.vertex_count(); ++v)
        if (vs >> v & 1) rep_[v] = r;
    }
  }

  EdgeMask fixed_mask() const noexcept { return fixed_mask_; }

  bool holds(EdgeMask flipped) const {
    return acyclic(flipped, true) && acyclic(flipped, false);
  }

 private:
  bool acyclic(EdgeMask flipped, bool plus) const {
    std::vector<VertexId> uf(rep_.size());
    std::iota(uf.begin(), uf.end(), VertexId{0});
    auto find = [&](VertexId a) {
      while (uf[a] != a) a = uf[a] = uf[uf[a]];
      return a;
    };
    for (const auto& e : lot_.edges()) {
      if (fixed_mask_ >> e.id & 1) continue;
      bool flip = flipped >> e.id & 1;
      VertexId end = plus != flip ? e.tail : e.head;
      VertexId a = find(rep_[e.label]), b = find(rep_[end]);
      if (a == b) return false;
      uf[a] = b;
    }
    return true;
  }

  const Lot& lot_;
  std::vector<VertexId> rep_;
  EdgeMask fixed_mask_ = 0;
};

}  // namespace

SignedForests signed_forests(const Lot& lot, std::span<const SubLot> sublots) {
  TwoComplex cx = build_complex(lot);
  SubcomplexFamily fam = derive_subcomplexes(lot, sublots);
  LinkGraph link = build_link(cx);
  SignedForests out;
  auto plus_blocks = sublink_blocks(cx, link, fam, Polarity::plus);
  auto minus_blocks = sublink_blocks(cx, link, fam, Polarity::minus);
  out.plus = relative_forest_check(polarity_subgraph(link, Polarity::plus), plus_blocks);
  out.minus = relative_forest_check(polarity_subgraph(link, Polarity::minus), minus_blocks);
  return out;
}

std::optional<EdgeSet> orientation_search(const Lot& lot, std::span<const SubLot> fixed) {
  for (const auto& s : fixed)
    if (!is_sublot(lot, s)) throw PreconditionError("fixed edge set is not a sub-LOT");
  derive_subcomplexes(lot, fixed);  // rejects overlaps

  FastForests forests(lot, fixed);
  std::vector<EdgeId> free_edges;
  for (EdgeId e = 0; e < lot.edge_count(); ++e)
    if (!(forests.fixed_mask() >> e & 1)) free_edges.push_back(e);
  if (free_edges.size() > 40)
    throw PreconditionError("orientation search over " + std::to_string(free_edges.size()) + " edges is out of reach");

  const std::uint64_t limit = std::uint64_t{1} << free_edges.size();
  for (std::uint64_t counter = 0; counter < limit; ++counter) {
    EdgeMask flipped = 0;
    for (std::size_t i = 0; i < free_edges.size(); ++i)
      if (counter >> i & 1) flipped |= EdgeMask{1} << free_edges[i];
    if (forests.holds(flipped)) return to_edge_set(flipped);
  }
  return std::nullopt;
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

WeightAssignment parse_weights(std::string_view text, const TwoComplex& cx, const LinkGraph& g) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_position;
  for (const auto& c : g.corners)
    if (c.cell) by_position[{c.cell->cell, c.cell->position}] = c.id;

  WeightAssignment w = canonical_weights(g);
  std::vector<bool> given(w.size(), false);
  for (const auto& line : detail::tokenize(text)) {
    if (line.tokens[0].text != "corner") detail::syntax_error(line, line.tokens[0], "expected 'corner'");
    if (line.tokens.size() != 5 || line.tokens[3].text != "=")
      detail::syntax_error(line, "expected 'corner CELL POS = P/Q'");
    auto cell_name = detail::identifier(line, 1);
    auto cell = cx.find_cell(cell_name);
    if (!cell)
      throw ParseError(ParseError::Kind::unknown_name, line.number, line.tokens[1].column,
                       "unknown cell '" + std::string(cell_name) + "'");
    auto pos = parse_int(line.tokens[2].text);
    if (!pos || *pos < 0) detail::syntax_error(line, line.tokens[2], "invalid corner position");
    auto it = by_position.find({*cell, static_cast<std::size_t>(*pos)});
    if (it == by_position.end())
      throw ParseError(ParseError::Kind::unknown_name, line.number, line.tokens[2].column,
                       "cell '" + std::string(cell_name) + "' has no corner " + std::to_string(*pos) + " in this link");

    std::string_view value = line.tokens[4].text;
    auto slash = value.find('/');
    auto num = parse_int(value.substr(0, slash));
    auto den = slash == std::string_view::npos ? std::optional<std::int64_t>(1) : parse_int(value.substr(slash + 1));
    if (!num || !den || *den <= 0) detail::syntax_error(line, line.tokens[4], "invalid rational '" + std::string(value) + "'");
    if (*num < 0) detail::syntax_error(line, line.tokens[4], "weights must be nonnegative");
    if (given[it->second]) detail::syntax_error(line, "corner given twice");
    given[it->second] = true;
    w[it->second] = Rational(*num, *den);
  }
  for (const auto& c : g.corners) {
    if (!c.is_delta() && !given[c.id])
      throw InvalidInput("no weight for corner " + cx.cell(c.cell->cell).name + " " + std::to_string(c.cell->position));
  }
  return w;
}

std::string to_text(const TwoComplex& cx, const LinkGraph& g, const WeightAssignment& w) {
  std::ostringstream out;
  for (const auto& c : g.corners)
    if (c.cell) out << "corner " << cx.cell(c.cell->cell).name << ' ' << c.cell->position << " = " << format_rational(w[c.id]) << '\n';
  return out.str();
}

}  // namespace lotva
