#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "lotva/certify.hpp"
#include "lotva/weights.hpp"

using namespace lotva;

namespace {

constexpr const char* kNonPrime =
    "lot fig1\n"
    "edge g a f\nedge a b d\nedge b c e\nedge c d b\nedge d e c\nedge e f g\n";

// Path v0 - v1 - ... - vn where edge i is labeled v((i + 2) mod (n + 1)).
Lot path_lot(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v <= n; ++v) names.push_back("v" + std::to_string(v));
  std::vector<LotEdge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, i, i + 1, (i + 2) % (n + 1)});
  return Lot("path", std::move(names), std::move(edges));
}

void BM_EnumerateSublots(benchmark::State& state) {
  Lot lot = path_lot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_sublots(lot));
}
BENCHMARK(BM_EnumerateSublots)->DenseRange(4, 16, 4);

void BM_CompleteSetSearch(benchmark::State& state) {
  Lot lot = parse_lot(kNonPrime);
  for (auto _ : state) benchmark::DoNotOptimize(complete_set_search(lot));
}
BENCHMARK(BM_CompleteSetSearch);

void BM_OrientationSearch(benchmark::State& state) {
  Lot lot = path_lot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orientation_search(lot));
}
BENCHMARK(BM_OrientationSearch)->DenseRange(4, 12, 4);

void BM_CanonicalWeightTest(benchmark::State& state) {
  TwoComplex cx = build_complex(path_lot(static_cast<std::size_t>(state.range(0))));
  LinkGraph g = build_link(cx);
  WeightAssignment w = canonical_weights(g);
  for (auto _ : state) benchmark::DoNotOptimize(weight_test(cx, g, w));
}
BENCHMARK(BM_CanonicalWeightTest)->RangeMultiplier(2)->Range(4, 32);

void BM_CertifyAndVerify(benchmark::State& state) {
  Lot lot = parse_lot(kNonPrime);
  for (auto _ : state) {
    auto r = certify_va(lot);
    benchmark::DoNotOptimize(verify_certificate(lot, *r.certificate));
  }
}
BENCHMARK(BM_CertifyAndVerify);

void BM_CertifyPath(benchmark::State& state) {
  Lot lot = path_lot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_va(lot));
}
BENCHMARK(BM_CertifyPath)->DenseRange(4, 12, 4);

}  // namespace
BENCHMARK_MAIN();
