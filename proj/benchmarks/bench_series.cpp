#include <benchmark/benchmark.h>

#include <woldlab/families.hpp>
#include <woldlab/series.hpp>
#include <woldlab/wold.hpp>

using namespace woldlab;

namespace {

// Raw partial sums with N terms at (0,0).
void BM_AlphaPartial(benchmark::State& state) {
  const auto tree = make_tree("tqb");
  const auto ws = cauchy_dual(make_weights("ex52", tree), tree);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(alpha_partial(*ws, *tree, {0, 0}, n).sum());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AlphaPartial)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_AlphaVerdict(benchmark::State& state) {
  const auto tree = make_tree("tqb");
  const auto ws = make_weights("ex52", tree);
  const auto dual = cauchy_dual(ws, tree);
  SeriesConfig cfg;
  cfg.use_plugins = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_verdict(*ws, *tree, {0, 0}, cfg));
    benchmark::DoNotOptimize(alpha_verdict(*dual, *tree, {0, 0}, cfg));
  }
}
BENCHMARK(BM_AlphaVerdict)->Arg(1)->Arg(0);

void BM_WoldVerdict(benchmark::State& state) {
  const auto tree = make_tree("tqb");
  const auto ws = make_weights("ex52", tree);
  for (auto _ : state) benchmark::DoNotOptimize(wold_verdict(ws, tree, {{0, 0}, 2, 2}).outcome);
}
BENCHMARK(BM_WoldVerdict);

}  // namespace
