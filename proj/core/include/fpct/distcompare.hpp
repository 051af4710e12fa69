#pragma once

#include <string>
#include <vector>

#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"

namespace fpct {

// One-dimensional edge-weight marginal with an evaluable CDF, generalized
// inverse, and an analytic density floor.  Supports the three shapes the
// toolkit needs: uniform intervals, finite atom lists, and piecewise-linear
// CDFs.
class MarginalSpec {
 public:
  enum class Kind { UniformInterval, FiniteAtoms, PiecewiseLinear };

  static MarginalSpec uniform_interval(double lo, double hi);
  // Atom values need not be sorted; duplicates are merged.
  static MarginalSpec finite_atoms(std::vector<double> values, std::vector<double> probs);
  // Nodes of the CDF: F(x[i]) = u[i]; x strictly increasing, u nondecreasing
  // with u.front() = 0 and u.back() = 1.
  static MarginalSpec piecewise_linear(std::vector<double> x, std::vector<double> u);
  // Marginal of one coordinate of a WeightDistribution.
  static MarginalSpec from_distribution(const WeightDistribution& dist, int axis = 0);

  Kind kind() const { return kind_; }
  double cdf(double x) const;        // right-continuous F(x)
  double cdf_left(double x) const;   // left limit F(x-)
  double quantile(double u) const;   // generalized inverse inf{x : F(x) >= u}
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  // Essential infimum of the density over the support; 0 for atomic marginals
  // and for CDFs with flat pieces inside the support.
  double density_floor() const;
  // Candidate extremal abscissae: support edges plus atom/node locations.
  std::vector<double> breakpoints() const;
  // CDF levels where the inverse can jump; used for u-meshes.
  std::vector<double> probability_breakpoints() const;

 private:
  MarginalSpec() = default;
  Kind kind_ = Kind::UniformInterval;
  double lo_ = 0, hi_ = 0;
  std::vector<double> xs_;  // atom values / CDF node abscissae
  std::vector<double> us_;  // cumulative probabilities at xs_
};

// Generalized-inverse sample of the marginal at probability u in [0, 1].
double skorokhod_values(const MarginalSpec& F, double u);

// sup_x |F1(x) - F2(x)|, evaluated at every breakpoint of either CDF and at
// the left limits there (exact for the supported CDF shapes), plus `mesh`
// extra uniformly spaced abscissae as a defensive refinement.
double kolmogorov_distance(const MarginalSpec& F1, const MarginalSpec& F2, int mesh = 0);

struct CouplingGapBound {
  double ks = 0;             // d_Kol: upper bound on the coupling distance
  double rho_star = 0;       // joint density floor min(rho1*, rho2*)
  double sup_gap_bound = 0;  // ks / rho_star: certified sup_u |Y1 - Y2|
  double mesh_sup_gap = 0;   // measured sup over the u-mesh
  bool ok = false;           // mesh_sup_gap <= sup_gap_bound (+ fp slack)
};

// Certified bound on the common-uniform coupling of two marginals.  Throws
// std::domain_error("coupling bound unavailable: density floor is zero") when
// either marginal lacks a positive density floor.
CouplingGapBound coupling_gap_bound(const MarginalSpec& F1, const MarginalSpec& F2);

struct GapBound {
  double value = 0;  // per unit |x|_1
  std::string route; // "primal", "dual", or "ks-upper"
};

// |m1(x) - m2(x)| <= max(b1/a1, b2/a2) * d per unit |x|_1.
GapBound gap_bound_primal(const BoundsSpec& m1, const BoundsSpec& m2, double coupling_dist);
// Looser route through the effective Hamiltonians: extra factor b1*b2/(a1*a2).
GapBound gap_bound_dual(const BoundsSpec& m1, const BoundsSpec& m2, double coupling_dist);

struct EmpiricalGapReport {
  double measured_gap = 0;  // |m1_hat - m2_hat| per unit |x|_1
  double primal_bound = 0;  // max(b1/a1, b2/a2) * d_Kol
  double ci = 0;            // combined confidence half-widths per unit |x|_1
  double ks = 0;
  bool ok = false;          // measured_gap <= primal_bound + ci
  TimeConstantEstimate estimate1, estimate2;
};

// Couples two iid media through a shared uniform stream (the second spec is
// re-seeded to match the first) and checks the measured time-constant gap
// against the primal bound.
EmpiricalGapReport empirical_gap_check(const EnvironmentSpec& spec1, const EnvironmentSpec& spec2,
                                       const std::vector<double>& x, int n, int seeds,
                                       int threads = 1);

}  // namespace fpct
