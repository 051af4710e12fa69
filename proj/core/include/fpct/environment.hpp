#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpct/lattice.hpp"

namespace fpct {

// Uniform ellipticity interval for edge-weights: 0 < a <= b.
struct BoundsSpec {
  double a = 1.0;
  double b = 1.0;

  BoundsSpec() = default;
  BoundsSpec(double a_, double b_);
  double ratio() const { return b / a; }
};

// Marginal law of a single weight draw.  Finite-atom laws may carry one
// weight per axis (a weight-vector per atom); scalar atoms broadcast to
// all axes.  Continuous laws are served through their inverse CDF, so a
// uniform stream value maps straight to a weight.
class WeightDistribution {
 public:
  enum class Kind { FiniteAtoms, UniformInterval, InverseCdfTable };

  static WeightDistribution finite_atoms(std::vector<std::vector<double>> atoms,
                                         std::vector<double> probs);
  static WeightDistribution uniform_interval(double lo, double hi);
  // Strictly increasing piecewise-linear inverse CDF through (u_i, v_i),
  // u_0 = 0, u_last = 1.
  static WeightDistribution inverse_cdf_table(std::vector<std::pair<double, double>> points);

  Kind kind() const { return kind_; }
  BoundsSpec support_bounds() const { return bounds_; }
  // Weight for stream value u in [0,1) on the given axis.
  double quantile(double u, int axis) const;
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<std::vector<double>>& atoms() const { return atoms_; }
  const std::vector<double>& probs() const { return probs_; }
  double uniform_lo() const { return lo_; }
  double uniform_hi() const { return hi_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

 private:
  WeightDistribution() = default;
  Kind kind_ = Kind::UniformInterval;
  BoundsSpec bounds_;
  std::vector<std::vector<double>> atoms_;  // FiniteAtoms
  std::vector<double> probs_;
  std::vector<double> cum_;
  double lo_ = 0, hi_ = 0;                         // UniformInterval
  std::vector<std::pair<double, double>> table_;   // InverseCdfTable
};

// Explicit per-edge weight table over a box, used for hand-built and
// CSV-loaded media.  Bounds are declared, not inferred, so a corrupted
// entry is caught by verify_bounds rather than hidden at load time.
struct ExplicitTable {
  GridGeometry box;  // topology ignored; coverage only
  std::vector<double> weights;  // [cell * 2d + dir]
  BoundsSpec declared;

  double weight_at(const LatticePoint& x, int dir) const;
};

struct EnvironmentSpec {
  enum class Kind { IidEdges, IidUndirected, HyperplaneSymmetric, Periodic, Explicit };

  Kind kind = Kind::IidEdges;
  int d = 1;
  uint64_t seed = 0;
  WeightDistribution distribution = WeightDistribution::uniform_interval(1.0, 2.0);
  std::vector<int> period;               // Periodic only
  std::optional<ExplicitTable> table;    // Explicit only

  static EnvironmentSpec iid_edges(int d, WeightDistribution dist, uint64_t seed);
  static EnvironmentSpec iid_undirected(int d, WeightDistribution dist, uint64_t seed);
  static EnvironmentSpec hyperplane_symmetric(int d, WeightDistribution dist, uint64_t seed);
  static EnvironmentSpec periodic(std::vector<int> period, WeightDistribution dist, uint64_t seed);
  static EnvironmentSpec explicit_table(ExplicitTable table);
  // Deterministic medium with every weight equal to c.
  static EnvironmentSpec constant(int d, double c);

  BoundsSpec bounds() const;
  void validate() const;
};

std::string kind_name(EnvironmentSpec::Kind k);

struct BoundsReport {
  double min_seen = 0;
  double max_seen = 0;
  bool ok = false;
};

// A sampled realization of the medium on a finite box.  Weights are a pure
// function of (spec, absolute cell, direction); the window just caches them.
class EnvironmentWindow {
 public:
  EnvironmentWindow(EnvironmentSpec spec, GridGeometry geom);

  const EnvironmentSpec& spec() const { return spec_; }
  const GridGeometry& geometry() const { return geom_; }
  int dim() const { return geom_.d; }
  Topology topology() const { return geom_.topology; }
  BoundsSpec bounds() const { return spec_.bounds(); }
  int64_t cell_count() const { return geom_.cells(); }

  double weight(const LatticePoint& x, int dir) const;
  double weight_by_index(int64_t cell, int dir) const { return weights_[cell * 2 * geom_.d + dir]; }

  // Scans every stored weight against the declared bounds.
  BoundsReport verify_bounds() const;
  // FNV-1a digest of the weight array; equal digests mean bitwise-equal
  // windows.
  uint64_t fingerprint() const;

 private:
  EnvironmentSpec spec_;
  GridGeometry geom_;
  std::vector<double> weights_;
};

// Weight of the edge (x, x+alpha) for the spec, independent of any window.
double environment_weight(const EnvironmentSpec& spec, const LatticePoint& x, int dir);

// Samples the box [lo, lo+extent) if lo is given, else a box centered at
// the origin (open-box) or based at the origin (torus).
EnvironmentWindow sample_window(const EnvironmentSpec& spec, const std::vector<int>& extent,
                                Topology topology,
                                const std::optional<std::vector<int>>& lo = std::nullopt);

// Parses rows "x1,..,xd,direction,weight" with direction a signed 1-based
// axis (e.g. 1 = +e1, -2 = -e2).  Bounds must be declared by the caller.
ExplicitTable load_explicit_csv(const std::string& path, int d, BoundsSpec declared);

}  // namespace fpct
