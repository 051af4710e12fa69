// Passage-time solver cost as the sampled window grows.

#include <benchmark/benchmark.h>

#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"

namespace {

using namespace fpct;

void BM_FirstPassageWindow(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  const auto spec =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 19);
  EnvironmentWindow env =
      sample_window(spec, {2 * radius + 1, 2 * radius + 1}, Topology::OpenBox);
  const LatticePoint source{0, 0};
  for (auto _ : state) {
    PassageTimeMap map = first_passage_times(env, source);
    benchmark::DoNotOptimize(map.times.data());
  }
  state.SetComplexityN(env.cell_count());
}

BENCHMARK(BM_FirstPassageWindow)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_ReachableSet(benchmark::State& state) {
  const auto spec =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 19);
  EnvironmentWindow env = sample_window(spec, {8, 8}, Topology::Torus);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    ReachReport reach = reachable_with_times(env, {0, 0}, t);
    benchmark::DoNotOptimize(reach.cells.data());
  }
}

BENCHMARK(BM_ReachableSet)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
