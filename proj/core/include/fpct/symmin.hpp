#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpct/environment.hpp"

namespace fpct {

// Finite-atom law of the weight-vector seen on one hyperplane level: atom k
// assigns weight atoms[k][i] to the step e_i.  Atoms with zero probability
// are carried but excluded from every computation.
struct AtomicMedium {
  int d = 1;
  std::vector<std::vector<double>> atoms;
  std::vector<double> probs;

  AtomicMedium() = default;
  AtomicMedium(int d_, std::vector<std::vector<double>> atoms_, std::vector<double> probs_);

  std::vector<int> support() const;
  BoundsSpec bounds() const;      // over the support
  double mean_weight(int axis) const;
};

// Candidate gradient profile: f[k] is the common discrete derivative of the
// candidate function on atom k.  Feasibility: sum_k probs[k] f[k] = 0 and
// |f[k] + p_i| <= (b/a) |p|_inf for every support atom and axis.
struct Profile {
  std::vector<double> p;
  std::vector<double> f;
};

// max over axes i of |t + p_i| / tau_i for one atom.
double h_sym(double t, std::span<const double> p, std::span<const double> atom);

struct TentMin {
  double t_star = 0;
  double value = 0;
};

// Unique minimizer of t -> h_sym(t, p, atom).  The function is a max of d
// tent functions, so its minimum sits on a breakpoint: a tent vertex or a
// pairwise tent crossing.
TentMin h_sym_minimum(std::span<const double> atom, std::span<const double> p);

struct StepDiagnostics {
  double mu0 = 0;        // mean of the per-atom values
  double gap = 0;        // esssup minus mean
  double sup_before = 0;
  double sup_after = 0;  // filled by iterate_step
  double xi = 0;         // filled by iterate_step
  std::vector<int> min0, S, I, S_plus, S_minus;
  std::vector<double> values;  // per-atom h_sym at the current profile
};

// Splits the support by the per-atom value: MIN0 = atoms already at their
// tent minimum (within a relative tie tolerance of 1e-9), S / I = atoms
// strictly above / below the mean, and S+/S- = movable atoms of S whose
// minimum lies right / left of the current point.
StepDiagnostics classify_sets(const Profile& profile, const AtomicMedium& medium);

// One descent step: atoms of S move toward their tent minimum, clipped at
// a * (value - mu0); atoms of I absorb the balance through xi so the mean
// of f stays zero.  Requires gap > 0.
std::pair<Profile, StepDiagnostics> iterate_step(const Profile& profile, const AtomicMedium& medium);

enum class MinimizerStatus {
  CorrectorAtTermination,
  MinimizerNotCorrector,
  ConvergedLimit,
  IterationCap,
};

std::string status_name(MinimizerStatus s);

struct AlgorithmResult {
  Profile profile;
  double hbar = 0;
  MinimizerStatus status = MinimizerStatus::IterationCap;
  std::vector<StepDiagnostics> trace;
};

// Iterates until the gap closes (the profile is then certified as a
// corrector), the termination test fires (minimizer that is not a
// corrector), or the iteration cap is hit.
AlgorithmResult run_algorithm(const AtomicMedium& medium, std::span<const double> p,
                              int max_iter = 100000, double tol = 1e-10);

// Independent reference minimizer of g(f) = max_k h_sym(f_k) over the
// mean-zero hyperplane: projected subgradient descent from f = 0 with
// diminishing steps, golden-section polish along descent directions, and a
// perturbation-star certificate of radius 1e-7.
double brute_force_Hbar(const AtomicMedium& medium, std::span<const double> p,
                        int resolution = 50000);

// True when the per-atom values are constant across the support within tol.
bool check_corrector(const Profile& profile, const AtomicMedium& medium, double tol);

// (min, max) of the per-atom values; these bracket the exact minimum.
std::pair<double, double> infsup_bounds(const Profile& profile, const AtomicMedium& medium);

}  // namespace fpct
