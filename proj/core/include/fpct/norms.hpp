#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fpct/environment.hpp"

namespace fpct {

using NormEvaluator = std::function<double(std::span<const double>)>;

// Tabulated values of a norm p -> H(p) on a finite set of directions.
struct NormTable {
  std::vector<std::vector<double>> directions;
  std::vector<double> values;
  std::vector<double> tolerances;   // per-entry solve tolerance
  std::vector<std::string> provenance;

  int dim() const { return directions.empty() ? 0 : static_cast<int>(directions[0].size()); }
  void validate() const;
};

// Evaluates H on a uniform angular mesh of 2*pi/gap directions (d = 2).
NormTable build_norm_table_2d(const NormEvaluator& H, double mesh_gap, double tolerance,
                              const std::string& provenance);

struct NormAxiomReport {
  bool ok = true;
  double worst_homogeneity = 0;   // max |H(l p) - l H(p)| over samples
  double worst_triangle = 0;      // max H(p+q) - H(p) - H(q) (positive = violated)
  double worst_lower_gap = 0;     // max |p|_inf / b - H(p) (positive = violated)
  int checked_pairs = 0;
};

struct NormAxiomOptions {
  std::vector<double> lambdas = {2.0, 0.5};
  int triangle_pairs = 100;
  uint64_t seed = 1;
  double tol = 1e-9;
};

// Checks positive homogeneity, the triangle inequality on random pairs,
// positivity, and the lower bound H(p) >= |p|_inf / b.
NormAxiomReport check_norm_axioms(const NormEvaluator& H, int d, const BoundsSpec& bounds,
                                  const NormAxiomOptions& opts = {});

struct DualNormValue {
  double value = 0;  // max_k p_k . x / H(p_k)
  double slack = 0;  // bound on how much the finite mesh can undershoot
};

// Dual norm L(x) = sup_p p.x / H(p) approximated from a table.  The slack
// uses the 1/a Lipschitz modulus of H in p: refining the mesh raises the
// value by at most the reported slack.
DualNormValue dual_norm(const NormTable& table, std::span<const double> x, const BoundsSpec& bounds);

// Vertices (counterclockwise) of the polygon {x : p_k . x <= H(p_k)} in
// d = 2.  This is the unit ball of the dual norm, i.e. the limit shape.
std::vector<std::array<double, 2>> limit_shape(const NormTable& table);

}  // namespace fpct
