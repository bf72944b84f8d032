// Serial vs parallel timings for the grid kernels. Argument 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "optocool/design.hpp"
#include "optocool/figures.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/sweep.hpp"

using namespace optocool;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_Sweep(benchmark::State& state) {
  SweepGrid grid;
  grid.model = ModelDescriptor::josephson(0.0, 0.0, 0.06);
  grid.mech = reference_mechanics();
  grid.policy = BranchPolicy::all;
  grid.axes = {Axis{AxisName::ej, 0.0, 1000.0, 60, AxisScale::linear},
               Axis{AxisName::delta, -0.5, 0.5, 21, AxisScale::linear}};
  const auto qs = all_quantities();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(grid, qs, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_SpectrumTransform(benchmark::State& state) {
  UniversalParams up;
  up.dtilde = -0.3;
  up.r1 = -0.2;
  up.r2 = 0.15;
  up.n = 50.0;
  std::vector<double> grid;
  for (int k = -300; k <= 300; ++k) grid.push_back(0.01 * k);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_via_transform(up, grid, mode(state)));
}

void BM_OptimizeDetuning(benchmark::State& state) {
  const auto family = ModelDescriptor::josephson(0.0, 390.0, 0.06);
  DetuningSearch search;
  search.exec = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_detuning(family, reference_mechanics(), Interval{-0.3, 0.0},
                                               BranchPolicy::plus_only, {}, search));
  }
}

}  // namespace

BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumTransform)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeDetuning)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
