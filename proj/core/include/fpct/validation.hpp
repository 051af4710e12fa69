#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fpct/cellproblem.hpp"
#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"
#include "fpct/symmin.hpp"

namespace fpct {

// Exhaustive reference computations for tiny windows.  Both enumerate paths
// explicitly and accumulate edge-weights in path order, which matches the
// accumulation order of the production solvers bit for bit, so agreement is
// checked with no tolerance.
PassageTimeMap oracle_first_passage_times(const EnvironmentWindow& env, const LatticePoint& source);
HorizonValue oracle_finite_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                   const LatticePoint& x, double t, const LatticeFunction& mu0);

// Deterministic random test media shared by the acceptance suite and the
// unit tests.  Probabilities are floored at 0.15 so every atom stays well
// inside the support.
struct GeneratedMedium {
  AtomicMedium medium;
  EnvironmentSpec spec;   // matching hyperplane-symmetric sampler
  std::vector<double> p;  // momentum exercised by the suite
};

std::vector<GeneratedMedium> d1_test_media();  // 5 media, 2-5 atoms in [1,3]
std::vector<GeneratedMedium> d2_test_media();  // 20 media, 2-6 atoms in [1,3]

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // worst margins, one line
  double seconds = 0;
};

// Runs one acceptance criterion (1-9) on up to `threads` workers.
CriterionResult run_criterion(int id, int threads);

// Runs all nine criteria in order; on_done (if set) fires after each one.
std::vector<CriterionResult> run_acceptance_suite(
    int threads, const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace fpct
