#include <benchmark/benchmark.h>

#include <woldlab/families.hpp>
#include <woldlab/operator.hpp>

using namespace woldlab;

namespace {

// S^k e_v on T_{3,inf} from the branch vertex; support stays at 3.
void BM_ShiftPowerKInfinity(benchmark::State& state) {
  const auto tree = make_tree("tkinf:3");
  const auto ws = make_weights("tkinf-isometric:k=3", tree);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_power(*ws, *tree, SparseVector::unit({0, 0}), k).norm_sq());
}
BENCHMARK(BM_ShiftPowerKInfinity)->RangeMultiplier(4)->Range(4, 1024);

// On the quasi-Brownian tree the support of S^k e_(0,m) grows linearly in k.
void BM_ShiftPowerQuasiBrownian(benchmark::State& state) {
  const auto tree = make_tree("tqb");
  const auto ws = make_weights("ex52", tree);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_power(*ws, *tree, SparseVector::unit({0, 0}), k).norm_sq());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShiftPowerQuasiBrownian)->RangeMultiplier(2)->Range(4, 256)->Complexity();

void BM_DefectWindow(benchmark::State& state) {
  const auto tree = make_tree("tqb");
  const auto ws = make_weights("ex52", tree);
  const auto depth = static_cast<std::size_t>(state.range(0));
  const auto vs = window_vertices(*tree, {{0, 0}, depth, depth});
  for (auto _ : state) {
    double worst = -1e300;
    for (const auto& v : vs) worst = std::max(worst, defect_diagonal(*ws, *tree, v, 3));
    benchmark::DoNotOptimize(worst);
  }
  state.counters["vertices"] = static_cast<double>(vs.size());
}
BENCHMARK(BM_DefectWindow)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
