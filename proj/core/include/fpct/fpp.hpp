#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fpct/environment.hpp"
#include "fpct/lattice.hpp"

namespace fpct {

struct Path {
  std::vector<LatticePoint> vertices;

  // Sum of edge-weights, accumulated in path order.
  double weight(const EnvironmentWindow& env) const;
  bool valid_steps() const;  // consecutive vertices differ by one unit step
};

// First-passage times from one source to every cell of the window.
struct PassageTimeMap {
  LatticePoint source;
  GridGeometry geometry;
  std::vector<double> times;  // by cell index; +inf where unreachable
  uint64_t env_fingerprint = 0;

  double at(const LatticePoint& x) const { return times[geometry.index(x)]; }
};

// Dijkstra over the window graph.  Priority ties are broken by the linear
// (lexicographic) cell order so results are deterministic.
PassageTimeMap first_passage_times(const EnvironmentWindow& env, const LatticePoint& source);

struct ReachableCell {
  LatticePoint y;
  double time;
};

struct ReachReport {
  std::vector<ReachableCell> cells;  // lexicographic order
  // Open-box only: some cell on the window face was reached within budget,
  // so the true reachable set may extend past the window.
  bool touches_boundary = false;
};

// {y : passage time from x is <= t} with the passage times.  On torus
// windows the expansion runs on the periodic lift of the medium, so points
// are absolute Z^d coordinates and the set is finite (it sits inside the
// l1 ball of radius t/a).
ReachReport reachable_with_times(const EnvironmentWindow& env, const LatticePoint& x, double t);

std::vector<LatticePoint> reachable_set(const EnvironmentWindow& env, const LatticePoint& x, double t);

struct TimeConstantEstimate {
  std::vector<double> direction;
  std::vector<int> n_values;
  uint64_t base_seed = 0;
  // scaled[s][k] = passage time to round(n_k * x) over n_k, for seed s.
  std::vector<std::vector<double>> scaled;
  double estimate = 0;    // mean over seeds at the largest n
  double half_width = 0;  // 95% Student-t half-width over seeds
};

struct EstimateOptions {
  int threads = 1;
  int window_margin = 2;
};

// Monte-Carlo time-constant estimate: fresh medium per seed, one Dijkstra
// per seed on a window wide enough to contain every optimal path
// (radius ceil(n_max * |x|_1 * b / a) + margin).
TimeConstantEstimate estimate_time_constant(const EnvironmentSpec& spec,
                                            const std::vector<double>& direction,
                                            const std::vector<int>& n_values, int seed_count,
                                            const EstimateOptions& opts = {});

}  // namespace fpct
