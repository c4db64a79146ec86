#include "lotva/linkage.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lotva/error.hpp"

namespace lotva {

EdgeEnd initial_end(const Letter& l) noexcept {
  return {l.edge, l.sign == Sign::plus ? Polarity::plus : Polarity::minus};
}

EdgeEnd terminal_end(const Letter& l) noexcept {
  return {l.edge, l.sign == Sign::plus ? Polarity::minus : Polarity::plus};
}

CornerClass Corner::corner_class() const noexcept {
  if (first.polarity != second.polarity) return CornerClass::plus_minus;
  return first.polarity == Polarity::plus ? CornerClass::plus_plus : CornerClass::minus_minus;
}

std::size_t LinkGraph::non_delta_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(corners.begin(), corners.end(), [](const Corner& c) { return !c.is_delta(); }));
}

namespace {

std::vector<EdgeEnd> all_nodes(std::size_t edges) {
  std::vector<EdgeEnd> nodes;
  for (std::size_t s = 0; s < 2 * edges; ++s) nodes.push_back(EdgeEnd::from_slot(s));
  return nodes;
}

void add_cell_corners(std::vector<Corner>& out, const TwoComplex& cx, std::size_t c) {
  const auto& w = cx.cell(c).boundary.letters;
  const std::size_t q = w.size();
  for (std::size_t i = 0; i < q; ++i)
    out.push_back({out.size(), terminal_end(w[i]), initial_end(w[(i + 1) % q]), CellPosition{c, i}, std::nullopt});
}

}  // namespace

LinkGraph build_link(const TwoComplex& cx) {
  LinkGraph g;
  g.complex_edge_count = cx.edge_count();
  g.nodes = all_nodes(cx.edge_count());
  for (std::size_t c = 0; c < cx.cell_count(); ++c) add_cell_corners(g.corners, cx, c);
  return g;
}

LinkGraph build_relative_link(const TwoComplex& cx, const SubcomplexFamily& fam) {
  validate_family(cx, fam);
  LinkGraph g;
  g.complex_edge_count = cx.edge_count();
  g.nodes = all_nodes(cx.edge_count());
  for (std::size_t c = 0; c < cx.cell_count(); ++c)
    if (!fam.part_of_cell(c)) add_cell_corners(g.corners, cx, c);

  g.delta_blocks.emplace();
  for (std::size_t i = 0; i < fam.parts.size(); ++i) {
    DeltaBlock block{i, {}};
    for (std::size_t e : fam.parts[i].edges) {
      block.nodes.push_back({e, Polarity::plus});
      block.nodes.push_back({e, Polarity::minus});
    }
    const auto& n = block.nodes;
    for (std::size_t a = 0; a < n.size(); ++a)
      for (std::size_t b = a + 1; b < n.size(); ++b)
        g.corners.push_back({g.corners.size(), n[a], n[b], std::nullopt, i});
    for (const auto& v : n) g.corners.push_back({g.corners.size(), v, v, std::nullopt, i});
    g.delta_blocks->push_back(std::move(block));
  }
  return g;
}

LinkGraph polarity_subgraph(const LinkGraph& g, Polarity p) {
  LinkGraph out;
  out.complex_edge_count = g.complex_edge_count;
  for (const auto& n : g.nodes)
    if (n.polarity == p) out.nodes.push_back(n);
  for (const auto& c : g.corners)
    if (c.first.polarity == p && c.second.polarity == p) out.corners.push_back(c);
  if (g.delta_blocks) {
    out.delta_blocks.emplace();
    for (const auto& b : *g.delta_blocks) {
      DeltaBlock nb{b.part, {}};
      for (const auto& n : b.nodes)
        if (n.polarity == p) nb.nodes.push_back(n);
      out.delta_blocks->push_back(std::move(nb));
    }
  }
  return out;
}

std::pair<LinkGraph, LinkGraph> signed_sublinks(const LinkGraph& g) {
  if (g.delta_blocks && !g.delta_blocks->empty()) throw PreconditionError("signed sublinks of a decorated link");
  return {polarity_subgraph(g, Polarity::plus), polarity_subgraph(g, Polarity::minus)};
}

ForestResult relative_forest_check(const LinkGraph& g, std::span<const ContractionBlock> blocks) {
  const std::size_t slots = g.slot_count();
  // Quotient node of each slot: a block id, or the slot itself.
  std::vector<std::size_t> rep(slots);
  std::iota(rep.begin(), rep.end(), std::size_t{0});
  std::vector<bool> in_block(slots, false);
  std::vector<bool> designated(g.corners.empty() ? 0 : g.corners.back().id + 1, false);
  for (const auto& c : g.corners)
    if (c.id >= designated.size()) designated.resize(c.id + 1, false);

  for (const auto& b : blocks) {
    if (b.nodes.empty()) continue;
    std::size_t r = b.nodes.front().slot();
    for (const auto& n : b.nodes) {
      if (n.slot() >= slots) throw InvalidInput("block node outside the link");
      if (in_block[n.slot()]) throw InvalidInput("overlapping contraction blocks");
      in_block[n.slot()] = true;
      rep[n.slot()] = r;
    }
    for (std::size_t id : b.corners)
      if (id < designated.size()) designated[id] = true;
  }

  std::vector<bool> present(slots, false);
  for (const auto& n : g.nodes) present[rep[n.slot()]] = true;

  std::vector<std::size_t> uf(slots);
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  // Accepted corners of the spanning forest, for lifting a witness cycle.
  std::vector<std::vector<std::pair<std::size_t, const Corner*>>> tree(slots);

  ForestResult result;
  std::size_t accepted = 0;
  for (const auto& c : g.corners) {
    if (designated[c.id]) continue;
    std::size_t a = rep[c.first.slot()], b = rep[c.second.slot()];
    if (a == b) {
      if (result.is_forest) {
        result.is_forest = false;
        result.witness = Cycle{{c.id, true}};
      }
      continue;
    }
    if (find(a) == find(b)) {
      if (result.is_forest) {
        result.is_forest = false;
        // Path b -> a through the forest closes the cycle a -c-> b -> a.
        std::vector<std::pair<std::size_t, const Corner*>> via(slots, {slots, nullptr});
        std::vector<std::size_t> queue{b};
        via[b] = {b, nullptr};
        for (std::size_t i = 0; i < queue.size() && via[a].first == slots; ++i) {
          std::size_t u = queue[i];
          for (auto [w, corner] : tree[u]) {
            if (via[w].first != slots) continue;
            via[w] = {u, corner};
            queue.push_back(w);
          }
        }
        Cycle z{{c.id, true}};
        Cycle back;
        for (std::size_t u = a; u != b; u = via[u].first) {
          const Corner* k = via[u].second;
          // Step via[u].first -> u.
          back.push_back({k->id, rep[k->second.slot()] == u && rep[k->first.slot()] == via[u].first});
        }
        std::reverse(back.begin(), back.end());
        z.insert(z.end(), back.begin(), back.end());
        result.witness = std::move(z);
      }
      continue;
    }
    uf[find(a)] = find(b);
    tree[a].push_back({b, &c});
    tree[b].push_back({a, &c});
    ++accepted;
  }
  std::size_t nodes = static_cast<std::size_t>(std::count(present.begin(), present.end(), true));
  result.components = nodes - accepted;
  return result;
}

std::vector<ContractionBlock> sublink_blocks(const TwoComplex& cx, const LinkGraph& link, const SubcomplexFamily& fam,
                                             Polarity p) {
  (void)cx;
  std::vector<ContractionBlock> out;
  for (const auto& part : fam.parts) {
    ContractionBlock b;
    for (std::size_t e : part.edges) b.nodes.push_back({e, p});
    for (const auto& c : link.corners) {
      if (!c.cell || !std::binary_search(part.cells.begin(), part.cells.end(), c.cell->cell)) continue;
      if (c.first.polarity == p && c.second.polarity == p) b.corners.push_back(c.id);
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<ContractionBlock> delta_blocks(const LinkGraph& relative_link, Polarity p) {
  if (!relative_link.delta_blocks) throw PreconditionError("link carries no Delta blocks");
  std::vector<ContractionBlock> out(relative_link.delta_blocks->size());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& n : (*relative_link.delta_blocks)[i].nodes)
      if (n.polarity == p) out[i].nodes.push_back(n);
  for (const auto& c : relative_link.corners)
    if (c.delta_block && c.first.polarity == p && c.second.polarity == p) out[*c.delta_block].corners.push_back(c.id);
  return out;
}

ForestResult signed_relative_forest(const TwoComplex& cx, const SubcomplexFamily& fam, Polarity p) {
  LinkGraph link = build_link(cx);
  auto blocks = sublink_blocks(cx, link, fam, p);
  return relative_forest_check(polarity_subgraph(link, p), blocks);
}

std::string node_name(const TwoComplex& cx, EdgeEnd n) {
  return cx.edge_name(n.edge) + (n.polarity == Polarity::plus ? "_plus" : "_minus");
}

std::string corner_label(const TwoComplex& cx, const Corner& c) {
  if (c.delta_block) return "delta:" + std::to_string(*c.delta_block);
  return cx.cell(c.cell->cell).name + ":" + std::to_string(c.cell->position);
}

std::string format_cycle(const TwoComplex& cx, const LinkGraph& g, const Cycle& z) {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : z) {
    auto it = std::find_if(g.corners.begin(), g.corners.end(), [&](const Corner& c) { return c.id == t.corner; });
    if (it == g.corners.end()) throw InvalidInput("cycle refers to an unknown corner");
    if (!first) out << ' ';
    first = false;
    EdgeEnd from = t.forward ? it->first : it->second;
    EdgeEnd to = t.forward ? it->second : it->first;
    out << node_name(cx, from) << "->" << node_name(cx, to) << '[' << corner_label(cx, *it) << ']';
  }
  return out.str();
}

std::string to_dot(const TwoComplex& cx, const LinkGraph& g) {
  std::ostringstream out;
  out << "graph \"" << (cx.name().empty() ? "link" : cx.name()) << "\" {\n";
  out << "  node [shape=circle, style=filled];\n";
  std::vector<bool> clustered(g.slot_count(), false);
  if (g.delta_blocks) {
    for (std::size_t i = 0; i < g.delta_blocks->size(); ++i) {
      out << "  subgraph cluster_delta_" << i << " {\n    label=\"delta:" << i << "\";\n";
      for (const auto& n : (*g.delta_blocks)[i].nodes) {
        clustered[n.slot()] = true;
        out << "    \"" << node_name(cx, n) << "\" [fillcolor=\""
            << (n.polarity == Polarity::plus ? "white" : "gray80") << "\"];\n";
      }
      out << "  }\n";
    }
  }
  for (const auto& n : g.nodes) {
    if (clustered[n.slot()]) continue;
    out << "  \"" << node_name(cx, n) << "\" [fillcolor=\"" << (n.polarity == Polarity::plus ? "white" : "gray80")
        << "\"];\n";
  }
  for (const auto& c : g.corners) {
    out << "  \"" << node_name(cx, c.first) << "\" -- \"" << node_name(cx, c.second) << "\" [label=\""
        << corner_label(cx, c) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace lotva
