#include "doctest.h"
#include "lotva/complex.hpp"
#include "lotva/error.hpp"
#include "oracles.hpp"

using namespace lotva;
using namespace lotva::testing;

namespace {

BoundaryWord word(std::initializer_list<int> letters) {
  BoundaryWord w;
  for (int l : letters)
    w.letters.push_back({static_cast<std::size_t>(l < 0 ? -l - 1 : l - 1), l < 0 ? Sign::minus : Sign::plus});
  return w;
}

}  // namespace

TEST_SUITE("complex") {
  TEST_CASE("lot cells read x z y^-1 z^-1") {
    Lot lot = fixture_lot("prime.lot");  // a->b:c, b->c:a
    TwoComplex cx = build_complex(lot);
    REQUIRE(cx.cell_count() == 2);
    CHECK(cx.cell(0).name == "d_0");
    CHECK(cx.edge_names() == lot.vertex_names());
    // vertex ids: a=0, b=1, c=2
    CHECK(cx.cell(0).boundary == word({1, 3, -2, -3}));
    CHECK(cx.cell(1).boundary == word({2, 1, -3, -1}));
    for (const auto& c : cx.cells()) CHECK(exponent_sum(c.boundary) == 0);
  }

  TEST_CASE("signed lot cells") {
    Lot lot = fixture_lot("prime.lot");
    std::vector<VertexId> x{1};
    TwoComplex cx = build_complex(sign_change(lot, x));
    CHECK(cx.cell(0).boundary == word({1, 3, 2, -3}));
    CHECK(cx.cell(1).boundary == word({-2, 1, -3, -1}));
    CHECK(exponent_sum(cx.cell(0).boundary) == 2);
    CHECK(exponent_sum(cx.cell(1).boundary) == -2);
  }

  TEST_CASE("complex text round trip and errors") {
    for (const char* f : {"pillow.cplx", "torus.cplx", "signed.cplx", "mixed.cplx"}) {
      TwoComplex cx = fixture_complex(f);
      CHECK(parse_complex(to_text(cx)) == cx);
    }
    TwoComplex lotcx = build_complex(fixture_lot("fig1.lot"));
    CHECK(parse_complex(to_text(lotcx)) == lotcx);

    CHECK_THROWS_AS(parse_complex("edge x\ncell c = x,y\n"), ParseError);
    CHECK_THROWS_AS(parse_complex("edge x\nedge x\n"), ParseError);
    CHECK_THROWS_AS(parse_complex("edge x\ncell c x\n"), ParseError);
    CHECK_THROWS_AS(parse_complex("edge x\ncell c = x\ncell c = -x\n"), ParseError);
    try {
      (void)parse_complex("edge x\n\ncell c = x,--x\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 0);
    }
  }

  TEST_CASE("word utilities") {
    BoundaryWord w = word({1, 2, -1, -2});
    CHECK(inverse(w) == word({2, 1, -2, -1}));
    CHECK(inverse(inverse(w)) == w);
    CHECK(match_rotation(word({-1, -2, 1, 2}), w) == 2);
    CHECK(match_rotation(w, w) == 0);
    CHECK_FALSE(match_rotation(word({1, 2, -2, -1}), w));
    CHECK(cyclic_equal(word({2, -1, -2, 1}), w));
    CHECK(canonical_rotation(word({2, -1, -2, 1})) == canonical_rotation(w));
    // Periodic words match at their smallest rotation.
    CHECK(match_rotation(word({1, 2, 1, 2}), word({1, 2, 1, 2})) == 0);
    CHECK(match_rotation(word({2, 1, 2, 1}), word({1, 2, 1, 2})) == 1);
  }

  TEST_CASE("canonical rotation is a class invariant") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
      TwoComplex cx = random_complex(rng, 3, 6);
      const auto& w = cx.cell(0).boundary;
      std::size_t r = rng() % w.size();
      BoundaryWord rot;
      for (std::size_t k = 0; k < w.size(); ++k) rot.letters.push_back(w.letters[(k + r) % w.size()]);
      CHECK(canonical_rotation(rot) == canonical_rotation(w));
      auto m = match_rotation(rot, w);
      REQUIRE(m);
      for (std::size_t k = 0; k < w.size(); ++k) CHECK(rot.letters[k] == w.letters[(k + *m) % w.size()]);
    }
  }

  TEST_CASE("subcomplexes derived from sub-LOTs") {
    Lot lot = fixture_lot("fig1.lot");
    std::vector<SubLot> subs{SubLot{{1, 2, 3, 4}}};
    auto fam = derive_subcomplexes(lot, subs);
    REQUIRE(fam.parts.size() == 1);
    CHECK(fam.parts[0].cells == std::vector<std::size_t>{1, 2, 3, 4});
    CHECK(fam.parts[0].edges == std::vector<std::size_t>{0, 1, 2, 3, 4});  // a..e
    CHECK(fam.part_of_cell(2) == 0);
    CHECK_FALSE(fam.part_of_cell(0));
    CHECK(fam.part_of_edge(4) == 0);
    CHECK_FALSE(fam.part_of_edge(5));
    CHECK(is_full(build_complex(lot), fam) == std::vector<bool>{true});

    std::vector<SubLot> overlapping{SubLot{{1, 2, 3, 4}}, SubLot{{0, 1, 2, 3, 4, 5}}};
    CHECK_THROWS_AS(derive_subcomplexes(lot, overlapping), InvalidInput);
  }

  TEST_CASE("family validation") {
    TwoComplex cx = fixture_complex("mixed.cplx");
    SubcomplexFamily good{{SubcomplexPart{{0, 1}, {0, 1}}}};
    CHECK_NOTHROW(validate_family(cx, good));
    CHECK(is_full(cx, good) == std::vector<bool>{false});  // C = x,-x is inside but missing

    SubcomplexFamily stray{{SubcomplexPart{{0}, {0}}}};  // A uses y
    CHECK_THROWS_AS(validate_family(cx, stray), InvalidInput);
    SubcomplexFamily twice{{SubcomplexPart{{0}, {2}}, SubcomplexPart{{0, 1}, {}}}};
    CHECK_THROWS_AS(validate_family(cx, twice), InvalidInput);
    SubcomplexFamily unsorted{{SubcomplexPart{{1, 0}, {}}}};
    CHECK_THROWS_AS(validate_family(cx, unsorted), InvalidInput);
  }

  TEST_CASE("complex constructor invariants") {
    CHECK_THROWS_AS(TwoComplex("k", {"x", "x"}, {}), InvalidInput);
    CHECK_THROWS_AS(TwoComplex("k", {"x"}, {Cell{"c", {}}}), InvalidInput);
    CHECK_THROWS_AS(TwoComplex("k", {"x"}, {Cell{"c", word({2})}}), InvalidInput);
  }
}
