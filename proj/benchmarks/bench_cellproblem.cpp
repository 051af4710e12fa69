// Discounted cell-problem solver cost as the discount rate shrinks (the
// contraction factor per sweep approaches 1, so sweep counts grow).

#include <benchmark/benchmark.h>

#include <vector>

#include "fpct/cellproblem.hpp"
#include "fpct/environment.hpp"

namespace {

using namespace fpct;

void BM_StationarySolve(benchmark::State& state) {
  const double epsilon = 1.0 / static_cast<double>(state.range(0));
  const auto spec =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 23);
  EnvironmentWindow env = sample_window(spec, {16, 16}, Topology::Torus);
  const std::vector<double> p{1.0, 0.5};
  for (auto _ : state) {
    CellField field = solve_stationary(env, p, epsilon, 1e-8);
    benchmark::DoNotOptimize(field.nu.values.data());
    state.counters["sweeps"] = static_cast<double>(field.sweeps);
  }
}

BENCHMARK(BM_StationarySolve)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_FiniteHorizon(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const auto spec =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 23);
  EnvironmentWindow env = sample_window(spec, {8, 8}, Topology::Torus);
  const LatticeFunction mu0 = LatticeFunction::zeros(env.geometry());
  const std::vector<double> p{1.0, 0.0};
  for (auto _ : state) {
    HorizonValue v = solve_finite_horizon(env, p, {0, 0}, t, mu0);
    benchmark::DoNotOptimize(v.value);
  }
}

BENCHMARK(BM_FiniteHorizon)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

}  // namespace
