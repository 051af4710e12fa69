// Symmetric-medium minimization: iterative algorithm against the d=1
// brute-force reference as atom counts grow.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "fpct/rng.hpp"
#include "fpct/symmin.hpp"

namespace {

using namespace fpct;

AtomicMedium random_medium(int d, int atom_count, uint64_t seed) {
  std::vector<std::vector<double>> atoms;
  std::vector<double> probs;
  for (int i = 0; i < atom_count; ++i) {
    std::vector<double> atom(d);
    for (int k = 0; k < d; ++k)
      atom[k] = 1.0 + 2.0 * rng::uniform01(rng::stream(seed, {i, k}));
    atoms.push_back(std::move(atom));
    probs.push_back(1.0);
  }
  for (double& q : probs) q /= atom_count;
  return AtomicMedium(d, std::move(atoms), std::move(probs));
}

void BM_RunAlgorithm(benchmark::State& state) {
  const int atoms = static_cast<int>(state.range(0));
  const AtomicMedium medium = random_medium(2, atoms, 7);
  const std::vector<double> p{1.0, 0.5};
  for (auto _ : state) {
    AlgorithmResult res = run_algorithm(medium, p, 200000, 1e-10);
    benchmark::DoNotOptimize(res.hbar);
    state.counters["iterations"] = static_cast<double>(res.trace.size());
  }
}

BENCHMARK(BM_RunAlgorithm)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_BruteForceReference(benchmark::State& state) {
  const int atoms = static_cast<int>(state.range(0));
  const AtomicMedium medium = random_medium(1, atoms, 11);
  const std::vector<double> p{1.0};
  for (auto _ : state) {
    const double hbar = brute_force_Hbar(medium, p);
    benchmark::DoNotOptimize(hbar);
  }
}

BENCHMARK(BM_BruteForceReference)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
