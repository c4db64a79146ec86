#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace lotva::testing;
namespace cli = lotva::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("lotva_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze reports the structure") {
    auto r = run({"analyze", fixture_path("fig1.lot")});
    CHECK(r.code == cli::exit_pass);
    CHECK(contains(r.out, "injective: yes"));
    CHECK(contains(r.out, "compressed: yes"));
    CHECK(contains(r.out, "reduced: yes"));
    CHECK(contains(r.out, "prime: no"));
    CHECK(contains(r.out, "1,2,3,4 (a->b:d b->c:e c->d:b d->e:c)"));
    CHECK(contains(r.out, "free decomposition: none"));
    CHECK(contains(r.out, "complete set: 1,2,3,4 -> prime quotient with 2 edge(s)"));

    auto s = run({"analyze", fixture_path("fig3.lot")});
    CHECK(contains(s.out, "free decomposition: at z"));
  }

  TEST_CASE("links and dot output") {
    auto r = run({"links", fixture_path("prime.lot")});
    CHECK(r.code == cli::exit_pass);
    CHECK(contains(r.out, "8 corners"));
    CHECK(contains(r.out, "lk+: forest"));
    auto d = run({"links", fixture_path("fig1.lot"), "--dot", "--relative", "1,2,3,4"});
    CHECK(d.code == cli::exit_pass);
    CHECK(contains(d.out, "subgraph cluster_delta_0"));
    auto rel = run({"links", fixture_path("fig1.lot"), "--relative", "1,2,3,4"});
    CHECK(contains(rel.out, "lk+ rel Delta+: forest"));
    CHECK(contains(rel.out, "lk- rel Delta-: forest"));
  }

  TEST_CASE("weight test exit codes") {
    auto fail = run({"weight-test", fixture_path("fig1.lot")});
    CHECK(fail.code == cli::exit_negative);
    CHECK(contains(fail.out, "weight test: FAIL"));
    CHECK(contains(fail.out, "cycle of weight"));

    auto pass = run({"weight-test", fixture_path("prime.lot")});
    CHECK(pass.code == cli::exit_pass);

    auto rel = run({"weight-test", fixture_path("fig1.lot"), "--relative", "1,2,3,4"});
    CHECK(rel.code == cli::exit_pass);
    CHECK(contains(rel.out, "relative to 1,2,3,4"));

    auto cx = run({"weight-test", fixture_path("torus.cplx")});
    CHECK((cx.code == cli::exit_pass || cx.code == cli::exit_negative));

    auto w = run({"weight-test", fixture_path("prime.lot"), "--weights", fixture_path("prime_half.weights")});
    CHECK((w.code == cli::exit_pass || w.code == cli::exit_negative));
    CHECK(contains(w.out, "weight test:"));
  }

  TEST_CASE("orientation search") {
    auto r = run({"orient-search", fixture_path("fig1.lot"), "--fix", "1,2,3,4"});
    CHECK(r.code == cli::exit_pass);
    CHECK(contains(r.out, "flipped: -"));
    auto bad = run({"orient-search", fixture_path("fig1.lot"), "--fix", "0"});
    CHECK(bad.code == cli::exit_input);
    CHECK(contains(bad.err, "do not form a sub-LOT"));
  }

  TEST_CASE("certify then verify") {
    std::string cert = std::filesystem::temp_directory_path() / "lotva_cli_fig1.cert";
    auto c = run({"certify", fixture_path("fig1.lot"), "--out", cert});
    CHECK(c.code == cli::exit_pass);
    CHECK(contains(c.out, "3 node(s)"));
    auto v = run({"verify-cert", fixture_path("fig1.lot"), cert});
    CHECK(v.code == cli::exit_pass);
    CHECK(contains(v.out, "accepted (3 node(s))"));

    auto printed = run({"certify", fixture_path("fig3.lot")});
    CHECK(printed.code == cli::exit_pass);
    CHECK(contains(printed.out, "(free-dec "));

    std::string tampered = temp_file("bad.cert", "(complete-set flipped=2 plus-components=1 minus-components=1\n"
                                                 "  (step sublot=1,2,3,4 vertex=a)\n"
                                                 "  (sublot edges=1,2,3,4 (base edges=0)))\n");
    auto rej = run({"verify-cert", fixture_path("fig1.lot"), tampered});
    CHECK(rej.code == cli::exit_negative);
    CHECK(contains(rej.out, "rejected at root: check flipped-in-sublot failed"));

    std::string garbage = temp_file("garbage.cert", "(complete-set\n  oops");
    auto g = run({"verify-cert", fixture_path("fig1.lot"), garbage});
    CHECK(g.code == cli::exit_input);
    CHECK(contains(g.err, "garbage.cert"));
  }

  TEST_CASE("certify rejects non-injective input") {
    std::string lot = temp_file("noninj.lot", "edge a b c\nedge b c a\nedge c d a\n");
    auto r = run({"certify", lot});
    CHECK(r.code == cli::exit_input);
    CHECK(contains(r.err, "not injective"));
  }

  TEST_CASE("diagram commands") {
    auto ok = run({"diagram", "check", fixture_path("pillow.diag"), "--complex", fixture_path("pillow.cplx")});
    CHECK(ok.code == cli::exit_pass);
    CHECK(contains(ok.out, "valid: V=4 E=4 F=2 chi=2 genus=0 (sphere)"));
    CHECK(contains(ok.out, "z(v0) = "));
    CHECK(contains(ok.out, "sink: v2, source: v0"));

    auto torus = run({"diagram", "check", fixture_path("torus.diag"), "--complex", fixture_path("torus.cplx")});
    CHECK(contains(torus.out, "chi=0 genus=1"));
    CHECK(contains(torus.out, "folding vertices: none"));
    CHECK(contains(torus.out, "degenerate-single-vertex"));

    auto bad = run({"diagram", "check", fixture_path("pillow_bad.diag"), "--complex", fixture_path("pillow.cplx")});
    CHECK(bad.code == cli::exit_negative);
    CHECK(contains(bad.out, "invalid: face-word-mismatch"));

    auto dbl = run({"diagram", "double", fixture_path("prime.lot"), "--cell", "d_0"});
    CHECK(dbl.code == cli::exit_pass);
    CHECK(contains(dbl.out, "face back cell d_0 orient -"));
    std::string path = temp_file("double.diag", dbl.out);
    auto checked = run({"diagram", "check", path, "--complex", fixture_path("prime.lot")});
    CHECK(checked.code == cli::exit_pass);
    CHECK(contains(checked.out, "(sphere)"));
  }

  TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::exit_input);
    CHECK(run({"frobnicate"}).code == cli::exit_input);
    CHECK(run({"analyze"}).code == cli::exit_input);
    CHECK(run({"--help"}).code == cli::exit_pass);
    auto missing = run({"analyze", "/nonexistent/file.lot"});
    CHECK(missing.code == cli::exit_input);
    CHECK(contains(missing.err, "cannot read"));
    std::string broken = temp_file("broken.lot", "edge a b\n");
    auto parse = run({"analyze", broken});
    CHECK(parse.code == cli::exit_input);
    CHECK(contains(parse.err, "broken.lot:"));
  }
}
