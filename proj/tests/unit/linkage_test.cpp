#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "lotva/error.hpp"
#include "lotva/linkage.hpp"
#include "oracles.hpp"

using namespace lotva;
using namespace lotva::testing;

namespace {

using NodePair = std::pair<std::size_t, std::size_t>;

std::multiset<NodePair> corner_multiset(const LinkGraph& g) {
  std::multiset<NodePair> out;
  for (const auto& c : g.corners) out.insert(std::minmax(c.first.slot(), c.second.slot()));
  return out;
}

// Component count of the quotient by depth-first search, and whether it is a
// forest by the edge count identity.
struct QuotientOracle {
  bool forest;
  std::size_t components;
};

QuotientOracle quotient_oracle(const LinkGraph& g, std::span<const ContractionBlock> blocks) {
  std::map<std::size_t, std::size_t> rep;
  for (const auto& n : g.nodes) rep[n.slot()] = n.slot();
  std::set<std::size_t> skip;
  for (const auto& b : blocks) {
    for (const auto& n : b.nodes) rep[n.slot()] = b.nodes.front().slot();
    skip.insert(b.corners.begin(), b.corners.end());
  }
  std::set<std::size_t> qnodes;
  for (auto [s, r] : rep) qnodes.insert(r);
  std::map<std::size_t, std::vector<std::size_t>> adj;
  std::size_t edges = 0;
  bool loop = false;
  for (const auto& c : g.corners) {
    if (skip.count(c.id)) continue;
    std::size_t a = rep.at(c.first.slot()), b = rep.at(c.second.slot());
    ++edges;
    loop = loop || a == b;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::size_t> seen;
  std::size_t comps = 0;
  for (std::size_t s : qnodes) {
    if (seen.count(s)) continue;
    ++comps;
    std::vector<std::size_t> stack{s};
    seen.insert(s);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u])
        if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return {!loop && edges + comps == qnodes.size(), comps};
}

// A witness must close up once block nodes are identified.
bool closes_in_quotient(const LinkGraph& g, std::span<const ContractionBlock> blocks, const Cycle& z) {
  std::map<std::size_t, std::size_t> rep;
  for (const auto& n : g.nodes) rep[n.slot()] = n.slot();
  for (const auto& b : blocks)
    for (const auto& n : b.nodes) rep[n.slot()] = b.nodes.front().slot();
  auto corner = [&](std::size_t id) {
    return *std::find_if(g.corners.begin(), g.corners.end(), [&](const Corner& c) { return c.id == id; });
  };
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!used.insert(z[i].corner).second) return false;
    const Corner& a = corner(z[i].corner);
    const Corner& b = corner(z[(i + 1) % z.size()].corner);
    EdgeEnd to = z[i].forward ? a.second : a.first;
    const auto& nb = z[(i + 1) % z.size()];
    EdgeEnd from = nb.forward ? b.first : b.second;
    if (rep.at(to.slot()) != rep.at(from.slot())) return false;
  }
  return !z.empty();
}

}  // namespace

TEST_SUITE("linkage") {
  TEST_CASE("one corner per letter, classes of a lot cell") {
    TwoComplex cx = build_complex(fixture_lot("prime.lot"));
    LinkGraph g = build_link(cx);
    CHECK(g.nodes.size() == 6);
    REQUIRE(g.corners.size() == 8);
    CHECK_FALSE(g.delta_blocks);
    // a z b^-1 z^-1 with z = c: (a-,c+) (c-,b-) (b+,c-) (c+,a+)
    CHECK(g.corners[0].corner_class() == CornerClass::plus_minus);
    CHECK(g.corners[1].corner_class() == CornerClass::minus_minus);
    CHECK(g.corners[2].corner_class() == CornerClass::plus_minus);
    CHECK(g.corners[3].corner_class() == CornerClass::plus_plus);
    CHECK(g.corners[0].first == EdgeEnd{0, Polarity::minus});
    CHECK(g.corners[0].second == EdgeEnd{2, Polarity::plus});
    CHECK(g.corners[3].second == EdgeEnd{0, Polarity::plus});
    CHECK(corner_label(cx, g.corners[5]) == "d_1:1");
    CHECK(node_name(cx, g.corners[1].second) == "b_minus");
  }

  TEST_CASE("corner count and degrees on random complexes") {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
      TwoComplex cx = random_complex(rng, 1 + i % 4, 10);
      LinkGraph g = build_link(cx);
      std::size_t letters = 0;
      std::vector<std::size_t> uses(2 * cx.edge_count(), 0);
      for (const auto& c : cx.cells()) {
        letters += c.boundary.size();
        for (const auto& l : c.boundary.letters) ++uses[2 * l.edge], ++uses[2 * l.edge + 1];
      }
      CHECK(g.corners.size() == letters);
      std::vector<std::size_t> degree(2 * cx.edge_count(), 0);
      for (const auto& c : g.corners) ++degree[c.first.slot()], ++degree[c.second.slot()];
      CHECK(degree == uses);
      for (std::size_t k = 0; k < g.corners.size(); ++k) CHECK(g.corners[k].id == k);
    }
  }

  TEST_CASE("polarity subgraphs partition same-polarity corners") {
    Rng rng(47);
    for (int i = 0; i < 100; ++i) {
      TwoComplex cx = random_complex(rng, 3, 10);
      LinkGraph g = build_link(cx);
      auto [plus, minus] = signed_sublinks(g);
      std::size_t mixed = std::count_if(g.corners.begin(), g.corners.end(), [](const Corner& c) {
        return c.corner_class() == CornerClass::plus_minus;
      });
      CHECK(plus.corners.size() + minus.corners.size() + mixed == g.corners.size());
      for (const auto& c : plus.corners) CHECK(c.corner_class() == CornerClass::plus_plus);
      for (const auto& c : minus.corners) CHECK(c.corner_class() == CornerClass::minus_minus);
      CHECK(plus.nodes.size() == cx.edge_count());
    }
  }

  TEST_CASE("relative link substitutes complete graphs with loops") {
    TwoComplex cx = fixture_complex("mixed.cplx");
    SubcomplexFamily fam{{SubcomplexPart{{0, 1}, {0, 1}}}};
    LinkGraph g = build_relative_link(cx, fam);
    REQUIRE(g.delta_blocks);
    REQUIRE(g.delta_blocks->size() == 1);
    CHECK((*g.delta_blocks)[0].nodes.size() == 4);
    CHECK(g.non_delta_count() == 2);  // only C = x,-x remains
    CHECK(g.corners.size() == 2 + 6 + 4);
    std::size_t loops =
        std::count_if(g.corners.begin(), g.corners.end(), [](const Corner& c) { return c.is_loop() && c.is_delta(); });
    CHECK(loops == 4);
    CHECK(corner_label(cx, g.corners.back()) == "delta:0");

    LinkGraph empty_rel = build_relative_link(cx, SubcomplexFamily{});
    REQUIRE(empty_rel.delta_blocks);
    CHECK(empty_rel.delta_blocks->empty());
    CHECK(empty_rel.corners.size() == build_link(cx).corners.size());
    CHECK_THROWS_AS(signed_sublinks(g), PreconditionError);
  }

  TEST_CASE("forest check agrees with a quotient oracle") {
    Rng rng(53);
    int cycles = 0, forests = 0;
    for (int i = 0; i < 400; ++i) {
      TwoComplex cx = random_complex(rng, 2 + i % 4, 8);
      SubcomplexFamily fam = random_family(rng, cx);
      LinkGraph link = build_link(cx);
      for (Polarity p : {Polarity::plus, Polarity::minus}) {
        auto blocks = sublink_blocks(cx, link, fam, p);
        LinkGraph sub = polarity_subgraph(link, p);
        auto r = relative_forest_check(sub, blocks);
        auto o = quotient_oracle(sub, blocks);
        CHECK(r.is_forest == o.forest);
        CHECK(r.components == o.components);
        if (r.is_forest) {
          ++forests;
          CHECK_FALSE(r.witness);
        } else {
          ++cycles;
          REQUIRE(r.witness);
          CHECK(closes_in_quotient(sub, blocks, *r.witness));
        }
        auto s = signed_relative_forest(cx, fam, p);
        CHECK(s.is_forest == r.is_forest);
      }
    }
    CHECK(cycles > 20);
    CHECK(forests > 20);
  }

  TEST_CASE("forest check rejects overlapping blocks") {
    TwoComplex cx = fixture_complex("torus.cplx");
    LinkGraph g = build_link(cx);
    std::vector<ContractionBlock> blocks{{{EdgeEnd{0, Polarity::plus}}, {}}, {{EdgeEnd{0, Polarity::plus}}, {}}};
    CHECK_THROWS_AS(relative_forest_check(g, blocks), InvalidInput);
  }

  TEST_CASE("lot links: prime two-edge lot is a forest on both signs") {
    TwoComplex cx = build_complex(fixture_lot("prime.lot"));
    SubcomplexFamily none;
    CHECK(signed_relative_forest(cx, none, Polarity::plus).is_forest);
    CHECK(signed_relative_forest(cx, none, Polarity::minus).is_forest);
  }

  TEST_CASE("sign change keeps the corner multiset") {
    Rng rng(59);
    for (int i = 0; i < 200; ++i) {
      Lot lot = random_tree_lot(rng, 1 + i % 9);
      std::vector<VertexId> x;
      for (VertexId v = 0; v < lot.vertex_count(); ++v)
        if (rng() & 1) x.push_back(v);
      CHECK(corner_multiset(build_link(build_complex(lot))) ==
            corner_multiset(build_link(build_complex(sign_change(lot, x)))));
    }
  }

  TEST_CASE("cycle formatting and dot export") {
    TwoComplex cx = fixture_complex("torus.cplx");
    LinkGraph g = build_link(cx);
    Cycle z{{0, true}, {1, false}};
    auto text = format_cycle(cx, g, z);
    CHECK(text.find("x_minus->y_plus[sq:0]") == 0);
    CHECK_THROWS_AS(format_cycle(cx, g, Cycle{{99, true}}), InvalidInput);

    SubcomplexFamily fam{{SubcomplexPart{{0}, {}}}};
    auto dot = to_dot(cx, build_relative_link(cx, fam));
    CHECK(dot.rfind("graph \"torus\" {", 0) == 0);
    CHECK(dot.find("subgraph cluster_delta_0") != std::string::npos);
    CHECK(dot.find("fillcolor=\"gray80\"") != std::string::npos);
    CHECK(dot.find("[label=\"sq:3\"]") != std::string::npos);
    CHECK(dot.back() == '\n');
  }
}
