#pragma once

#include <span>
#include <vector>

#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"
#include "fpct/lattice.hpp"

namespace fpct {

// Scalar function on the cells of a window.  Torus geometries read points
// through the wrap, i.e. the function extends periodically.
struct LatticeFunction {
  GridGeometry geometry;
  std::vector<double> values;

  LatticeFunction() = default;
  LatticeFunction(GridGeometry g, std::vector<double> v);
  static LatticeFunction zeros(const GridGeometry& g);

  double at(const LatticePoint& x) const { return values[geometry.index(x)]; }
  // max |phi(x+alpha) - phi(x)| over window edges (Lipschitz constant for
  // the l1 metric).
  double lipschitz_norm() const;
};

// sup over unit steps alpha of (phi(x) - phi(x+alpha) - p.alpha) / tau(x,alpha).
double discrete_hamiltonian(const LatticeFunction& phi, std::span<const double> p,
                            const LatticePoint& x, const EnvironmentWindow& env);

// Resolvent-scale solution of nu(x) = min_alpha { p.alpha + exp(-eps tau(x,alpha)) nu(x+alpha) }.
struct CellField {
  std::vector<double> p;
  double epsilon = 0;
  LatticeFunction nu;
  double residual = 0;             // sup |nu - one more sweep of nu|
  int sweeps = 0;
  std::vector<double> sweep_diffs; // sup-norm change per sweep
};

// Gauss-Seidel fixed-point iteration in lexicographic cell order on a torus
// window; the update is a sup-norm contraction with factor exp(-eps a).
CellField solve_stationary(const EnvironmentWindow& env, std::span<const double> p, double epsilon,
                           double tol = 1e-10);

// max over cells of |eps nu(x) + H(nu, p, x)|.
double check_hjb_residual(const CellField& field, const EnvironmentWindow& env);

struct StationaryLadderPoint {
  double epsilon = 0;
  double value = 0;     // -eps nu_eps(0)
  double residual = 0;
  double hjb_residual = 0;
  int sweeps = 0;
};

struct StationaryLadderResult {
  std::vector<StationaryLadderPoint> points;
  // Linear-in-eps extrapolation through the two smallest ladder points.
  double extrapolated = 0;
};

StationaryLadderResult estimate_Hbar_stationary(const EnvironmentWindow& env, std::span<const double> p,
                                                std::vector<double> eps_ladder, double tol = 1e-10);

struct HorizonValue {
  LatticePoint x;
  double t = 0;
  double value = 0;
  LatticePoint argmin;
};

// mu(x,t) = min over y reachable within t of [ p.(y-x) + mu0(y) ]; the
// running cost telescopes along any admissible path, so only the endpoint
// matters.  Throws std::domain_error if an open-box window clips the
// reachable set.
HorizonValue solve_finite_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                  const LatticePoint& x, double t, const LatticeFunction& mu0);

struct HorizonLadderPoint {
  double t = 0;
  double value = 0;  // -mu(0,t)/t
};

struct HorizonLadderResult {
  std::vector<HorizonLadderPoint> points;
  double estimate = 0;  // value at the largest horizon
};

HorizonLadderResult estimate_Hbar_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                          std::vector<double> t_ladder);

struct ComparisonSample {
  LatticePoint x;
  double t = 0;
};

struct ComparisonViolation {
  LatticePoint x;
  double t = 0;
  double mu = 0;
  double lower = 0;  // phi(x) - t sup_x H
  double upper = 0;  // phi(x) - t inf_x H
  bool below_lower = false;
  bool above_upper = false;
};

struct ComparisonReport {
  double sup_H = 0;
  double inf_H = 0;
  std::vector<ComparisonViolation> violations;
};

// Checks mu(x,t) >= phi(x) - t sup_x H  and  mu(x,t) <= phi(x) - t inf_x H
// at each sample, with mu0 = phi.  Violations are reported, not thrown.
ComparisonReport check_comparison_principle(const LatticeFunction& phi, std::span<const double> p,
                                            const EnvironmentWindow& env,
                                            const std::vector<ComparisonSample>& samples,
                                            double slack = 1e-9);

}  // namespace fpct
