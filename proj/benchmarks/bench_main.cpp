#include <cmath>
#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "nlstrain/bound_state.hpp"
#include "nlstrain/evolution.hpp"
#include "nlstrain/kink.hpp"
#include "nlstrain/train.hpp"

namespace {

using namespace nlstrain;

void BM_StrangStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid1D grid(200.0, n);
  const SplitStepIntegrator integrator(grid, Nonlinearity::pure_power(2.0));
  std::vector<Complex> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sqrt(2.0) / std::cosh(grid.x(i));
  for (auto _ : state) {
    integrator.advance(u, 1e-3, 10);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond);

void BM_BoundState(benchmark::State& state) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const double omega = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(solve_bound_state(nl, omega, 1).phi0);
}
BENCHMARK(BM_BoundState)->Unit(benchmark::kMillisecond);

void BM_KinkProfile(benchmark::State& state) {
  const auto nl = Nonlinearity::double_power(1.0, 2.0);
  const KinkParams params = find_kink_params(nl);
  for (auto _ : state) benchmark::DoNotOptimize(solve_kink_profile(nl, params).size());
}
BENCHMARK(BM_KinkProfile)->Unit(benchmark::kMillisecond);

void BM_SourceTerm(benchmark::State& state) {
  const auto nl = Nonlinearity::pure_power(1.0);
  const TrainModel model(preset(PresetKind::A, static_cast<int>(state.range(0)), 20.0, 1.0, nl),
                         std::make_shared<BoundStateCache>(nl));
  const Grid1D grid = auto_grid(model, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.source_term(t, grid).values.data());
    t += 1e-3;
  }
  state.counters["nodes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_SourceTerm)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
