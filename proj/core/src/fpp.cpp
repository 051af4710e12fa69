#include "fpct/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "fpct/parallel.hpp"
#include "fpct/stats.hpp"

namespace fpct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry {
  double dist;
  int64_t cell;
  bool operator>(const QueueEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    return cell > o.cell;  // lexicographic tie-break
  }
};
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>>;
}  // namespace

double Path::weight(const EnvironmentWindow& env) const {
  if (vertices.size() < 2) return 0.0;
  const DirectionSet dirs(env.dim());
  double w = 0;
  for (size_t i = 0; i + 1 < vertices.size(); ++i) {
    int dir = -1;
    for (int k = 0; k < dirs.count(); ++k) {
      LatticePoint v = vertices[i];
      dirs.step_inplace(v, k);
      if (v == vertices[i + 1]) {
        dir = k;
        break;
      }
    }
    if (dir < 0) throw std::invalid_argument("path steps must be unit lattice steps");
    w += env.weight(vertices[i], dir);
  }
  return w;
}

bool Path::valid_steps() const {
  for (size_t i = 0; i + 1 < vertices.size(); ++i) {
    int64_t diff = 0;
    for (size_t a = 0; a < vertices[i].size(); ++a)
      diff += std::abs(vertices[i + 1][a] - vertices[i][a]);
    if (diff != 1) return false;
  }
  return true;
}

PassageTimeMap first_passage_times(const EnvironmentWindow& env, const LatticePoint& source) {
  const GridGeometry& g = env.geometry();
  const int nd = 2 * g.d;
  PassageTimeMap out;
  out.source = source;
  out.geometry = g;
  out.env_fingerprint = env.fingerprint();
  out.times.assign(g.cells(), kInf);

  int64_t src = g.index(source);
  out.times[src] = 0.0;
  MinQueue pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [dist, cell] = pq.top();
    pq.pop();
    if (dist > out.times[cell]) continue;  // lazy deletion
    for (int dir = 0; dir < nd; ++dir) {
      int64_t nb = g.neighbor(cell, dir);
      if (nb < 0) continue;
      double cand = dist + env.weight_by_index(cell, dir);
      if (cand < out.times[nb]) {
        out.times[nb] = cand;
        pq.push({cand, nb});
      }
    }
  }
  return out;
}

namespace {

// Budget-limited Dijkstra on the periodic lift of a torus window: cells are
// absolute Z^d points, weights read through the wrap.  The visited region
// is finite because every step costs at least a.
std::unordered_map<int64_t, double> lifted_times(const EnvironmentWindow& env, const LatticePoint& x,
                                                 double t, const GridGeometry& cover) {
  const int nd = 2 * cover.d;
  std::unordered_map<int64_t, double> dist;
  MinQueue pq;
  int64_t src = cover.index(x);
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [dcur, cell] = pq.top();
    pq.pop();
    auto it = dist.find(cell);
    if (it != dist.end() && dcur > it->second) continue;
    LatticePoint p = cover.point(cell);
    for (int dir = 0; dir < nd; ++dir) {
      int64_t nb = cover.neighbor(cell, dir);
      if (nb < 0) continue;
      double cand = dcur + env.weight(p, dir);
      if (cand > t) continue;  // everything stored stays within budget
      auto [jt, inserted] = dist.try_emplace(nb, cand);
      if (!inserted) {
        if (cand >= jt->second) continue;
        jt->second = cand;
      }
      pq.push({cand, nb});
    }
  }
  return dist;
}

}  // namespace

ReachReport reachable_with_times(const EnvironmentWindow& env, const LatticePoint& x, double t) {
  if (t < 0) throw std::invalid_argument("time budget must be >= 0");
  ReachReport rep;
  if (env.topology() == Topology::OpenBox) {
    PassageTimeMap map = first_passage_times(env, x);
    for (int64_t i = 0; i < env.cell_count(); ++i) {
      if (map.times[i] > t) continue;
      if (env.geometry().on_boundary(i)) rep.touches_boundary = true;
      rep.cells.push_back({env.geometry().point(i), map.times[i]});
    }
  } else {
    // A path of weight <= t makes at most t/a steps, so it stays inside
    // this cover box; no feasible path is clipped.
    int radius = static_cast<int>(std::floor(t / env.bounds().a)) + 1;
    std::vector<int> lo(env.dim()), extent(env.dim());
    for (int a = 0; a < env.dim(); ++a) {
      lo[a] = x[a] - radius;
      extent[a] = 2 * radius + 1;
    }
    GridGeometry cover(lo, extent, Topology::OpenBox);
    auto dist = lifted_times(env, x, t, cover);
    rep.cells.reserve(dist.size());
    for (const auto& [cell, dv] : dist) rep.cells.push_back({cover.point(cell), dv});
  }
  std::sort(rep.cells.begin(), rep.cells.end(),
            [](const ReachableCell& a, const ReachableCell& b) { return a.y < b.y; });
  return rep;
}

std::vector<LatticePoint> reachable_set(const EnvironmentWindow& env, const LatticePoint& x, double t) {
  ReachReport rep = reachable_with_times(env, x, t);
  std::vector<LatticePoint> out;
  out.reserve(rep.cells.size());
  for (auto& c : rep.cells) out.push_back(std::move(c.y));
  return out;
}

TimeConstantEstimate estimate_time_constant(const EnvironmentSpec& spec,
                                            const std::vector<double>& direction,
                                            const std::vector<int>& n_values, int seed_count,
                                            const EstimateOptions& opts) {
  if (direction.empty() || static_cast<int>(direction.size()) != spec.d)
    throw std::invalid_argument("direction rank mismatch");
  if (n_values.empty() || seed_count < 1) throw std::invalid_argument("need n values and seeds");
  for (int n : n_values)
    if (n < 1) throw std::invalid_argument("n values must be >= 1");

  double l1 = 0;
  for (double v : direction) l1 += std::abs(v);
  if (l1 == 0) throw std::invalid_argument("direction must be nonzero");
  int n_max = *std::max_element(n_values.begin(), n_values.end());
  BoundsSpec bb = spec.bounds();
  int radius = static_cast<int>(std::ceil(n_max * l1 * bb.ratio())) + opts.window_margin;

  TimeConstantEstimate est;
  est.direction = direction;
  est.n_values = n_values;
  est.base_seed = spec.seed;
  est.scaled.assign(seed_count, std::vector<double>(n_values.size(), 0.0));

  parallel_for(seed_count, opts.threads, [&](int64_t s) {
    EnvironmentSpec replica = spec;
    replica.seed = spec.seed + static_cast<uint64_t>(s);
    EnvironmentWindow env(replica, centered_box(spec.d, radius));
    PassageTimeMap map = first_passage_times(env, LatticePoint(spec.d, 0));
    for (size_t k = 0; k < n_values.size(); ++k) {
      std::vector<double> target(direction.size());
      for (size_t a = 0; a < direction.size(); ++a) target[a] = n_values[k] * direction[a];
      est.scaled[s][k] = map.at(round_to_lattice(target)) / n_values[k];
    }
  });

  std::vector<double> at_largest(seed_count);
  size_t k_max = 0;
  for (size_t k = 0; k < n_values.size(); ++k)
    if (n_values[k] == n_max) k_max = k;
  for (int s = 0; s < seed_count; ++s) at_largest[s] = est.scaled[s][k_max];
  est.estimate = stats::mean(at_largest);
  est.half_width = stats::t_half_width(at_largest);
  return est;
}

}  // namespace fpct
