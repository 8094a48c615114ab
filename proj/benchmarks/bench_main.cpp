#include <benchmark/benchmark.h>

#include "evwg/classical.hpp"
#include "evwg/quantum.hpp"
#include "evwg/resonance.hpp"

using namespace evwg;

namespace {

DimensionlessParams modulated() {
  DimensionlessParams dp;
  dp.eps = 0.7;
  return dp;
}

void BM_StrobeMap(benchmark::State& state) {
  const StroboscopicMap map(modulated(), {static_cast<int>(state.range(0)), Scheme::forest_ruth4});
  PhaseState z{2.0, 1.0, 0.3, -0.4, 0.0};
  for (auto _ : state) {
    z = map(z);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_StrobeMap)->Arg(256)->Arg(1024);

void BM_SplitStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double eps = state.range(1) / 10.0;
  DimensionlessParams dp;
  dp.eps = eps;
  const double L = dp.r1 + 4.0;
  const SplitStepPropagator prop(n, L, dp, default_quantum_config(dp));
  auto w = init_min_uncertainty(n, L, dp.kbar, 0.5, 0.5, 0.0, 0.0, 0.1);
  for (auto _ : state) prop.advance(w, 16);
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_SplitStep)->Args({256, 0})->Args({256, 7})->Unit(benchmark::kMillisecond);

void BM_Omega0(benchmark::State& state) {
  const DimensionlessParams dp;
  double h = 0.02;
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega0_of_energy(h, dp));
    h = h < 40.0 ? h * 1.1 : 0.02;
  }
}
BENCHMARK(BM_Omega0);

void BM_AsymmetryMetric(benchmark::State& state) {
  const DimensionlessParams dp;
  const auto w = init_min_uncertainty(256, dp.r1 + 4.0, dp.kbar, 0.5, 0.0, 0.0, 0.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(asymmetry_metric(w));
}
BENCHMARK(BM_AsymmetryMetric)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
