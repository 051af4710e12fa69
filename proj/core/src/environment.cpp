#include "fpct/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>

#include "fpct/rng.hpp"

namespace fpct {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

inline int wrap(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}
}  // namespace

BoundsSpec::BoundsSpec(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0) || !(b >= a)) throw std::invalid_argument("weight bounds need 0 < a <= b");
}

WeightDistribution WeightDistribution::finite_atoms(std::vector<std::vector<double>> atoms,
                                                    std::vector<double> probs) {
  if (atoms.empty() || atoms.size() != probs.size())
    throw std::invalid_argument("finite-atoms law needs matching atoms and probabilities");
  double lo = std::numeric_limits<double>::infinity(), hi = 0, sum = 0;
  for (const auto& t : atoms) {
    if (t.empty()) throw std::invalid_argument("atom weight-vector is empty");
    for (double w : t) {
      if (!(w > 0)) throw std::invalid_argument("atom weights must be positive");
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  for (double p : probs) {
    if (p < 0) throw std::invalid_argument("atom probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("atom probabilities must sum to 1");
  WeightDistribution w;
  w.kind_ = Kind::FiniteAtoms;
  w.bounds_ = BoundsSpec(lo, hi);
  w.atoms_ = std::move(atoms);
  w.probs_ = std::move(probs);
  w.cum_.resize(w.probs_.size());
  double c = 0;
  for (size_t i = 0; i < w.probs_.size(); ++i) {
    c += w.probs_[i];
    w.cum_[i] = c;
  }
  w.cum_.back() = 1.0;
  return w;
}

WeightDistribution WeightDistribution::uniform_interval(double lo, double hi) {
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("uniform interval needs 0 < lo < hi");
  WeightDistribution w;
  w.kind_ = Kind::UniformInterval;
  w.bounds_ = BoundsSpec(lo, hi);
  w.lo_ = lo;
  w.hi_ = hi;
  return w;
}

WeightDistribution WeightDistribution::inverse_cdf_table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2 || points.front().first != 0.0 || points.back().first != 1.0)
    throw std::invalid_argument("inverse CDF table must run from u=0 to u=1");
  for (size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first))
      throw std::invalid_argument("inverse CDF table u-grid must increase strictly");
    if (points[i].second < points[i - 1].second)
      throw std::invalid_argument("inverse CDF values must be nondecreasing");
  }
  if (!(points.front().second > 0)) throw std::invalid_argument("inverse CDF values must be positive");
  WeightDistribution w;
  w.kind_ = Kind::InverseCdfTable;
  w.bounds_ = BoundsSpec(points.front().second, points.back().second);
  w.table_ = std::move(points);
  return w;
}

double WeightDistribution::quantile(double u, int axis) const {
  switch (kind_) {
    case Kind::FiniteAtoms: {
      auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
      size_t k = std::min<size_t>(cum_.size() - 1, static_cast<size_t>(it - cum_.begin()));
      const auto& t = atoms_[k];
      return t.size() == 1 ? t[0] : t[static_cast<size_t>(axis)];
    }
    case Kind::UniformInterval:
      return lo_ + u * (hi_ - lo_);
    case Kind::InverseCdfTable: {
      auto it = std::upper_bound(table_.begin(), table_.end(), u,
                                 [](double v, const std::pair<double, double>& q) { return v < q.first; });
      if (it == table_.begin()) return table_.front().second;
      if (it == table_.end()) return table_.back().second;
      auto [u1, v1] = *(it - 1);
      auto [u2, v2] = *it;
      return v1 + (u - u1) / (u2 - u1) * (v2 - v1);
    }
  }
  throw std::logic_error("unreachable");
}

double ExplicitTable::weight_at(const LatticePoint& x, int dir) const {
  if (!box.inside(x)) throw std::out_of_range("explicit table does not cover the requested cell");
  return weights[box.index(x) * 2 * box.d + dir];
}

EnvironmentSpec EnvironmentSpec::iid_edges(int d, WeightDistribution dist, uint64_t seed) {
  EnvironmentSpec s;
  s.kind = Kind::IidEdges;
  s.d = d;
  s.distribution = std::move(dist);
  s.seed = seed;
  s.validate();
  return s;
}

EnvironmentSpec EnvironmentSpec::iid_undirected(int d, WeightDistribution dist, uint64_t seed) {
  EnvironmentSpec s = iid_edges(d, std::move(dist), seed);
  s.kind = Kind::IidUndirected;
  return s;
}

EnvironmentSpec EnvironmentSpec::hyperplane_symmetric(int d, WeightDistribution dist, uint64_t seed) {
  EnvironmentSpec s = iid_edges(d, std::move(dist), seed);
  s.kind = Kind::HyperplaneSymmetric;
  return s;
}

EnvironmentSpec EnvironmentSpec::periodic(std::vector<int> period, WeightDistribution dist, uint64_t seed) {
  EnvironmentSpec s;
  s.kind = Kind::Periodic;
  s.d = static_cast<int>(period.size());
  s.period = std::move(period);
  s.distribution = std::move(dist);
  s.seed = seed;
  s.validate();
  return s;
}

EnvironmentSpec EnvironmentSpec::explicit_table(ExplicitTable table) {
  EnvironmentSpec s;
  s.kind = Kind::Explicit;
  s.d = table.box.d;
  s.table = std::move(table);
  s.validate();
  return s;
}

EnvironmentSpec EnvironmentSpec::constant(int d, double c) {
  return iid_edges(d, WeightDistribution::finite_atoms({{c}}, {1.0}), 0);
}

BoundsSpec EnvironmentSpec::bounds() const {
  if (kind == Kind::Explicit) return table->declared;
  return distribution.support_bounds();
}

void EnvironmentSpec::validate() const {
  if (d < 1) throw std::invalid_argument("environment dimension must be >= 1");
  if (kind == Kind::Periodic) {
    if (static_cast<int>(period.size()) != d) throw std::invalid_argument("period rank mismatch");
    for (int p : period)
      if (p < 1) throw std::invalid_argument("period entries must be >= 1");
  }
  if (kind == Kind::Explicit) {
    if (!table.has_value()) throw std::invalid_argument("explicit medium needs a weight table");
    if (table->box.d != d) throw std::invalid_argument("explicit table rank mismatch");
    if (table->weights.size() != static_cast<size_t>(table->box.cells() * 2 * d))
      throw std::invalid_argument("explicit table weight array size mismatch");
  }
  if (kind != Kind::Explicit && distribution.kind() == WeightDistribution::Kind::FiniteAtoms) {
    for (const auto& t : distribution.atoms())
      if (t.size() != 1 && static_cast<int>(t.size()) != d)
        throw std::invalid_argument("atom weight-vectors must have 1 or d components");
  }
}

std::string kind_name(EnvironmentSpec::Kind k) {
  switch (k) {
    case EnvironmentSpec::Kind::IidEdges: return "iid-edges";
    case EnvironmentSpec::Kind::IidUndirected: return "iid-undirected";
    case EnvironmentSpec::Kind::HyperplaneSymmetric: return "hyperplane-symmetric";
    case EnvironmentSpec::Kind::Periodic: return "periodic";
    case EnvironmentSpec::Kind::Explicit: return "explicit";
  }
  return "?";
}

namespace {

inline int64_t wrap64(int64_t v, int64_t n) {
  int64_t r = v % n;
  return r < 0 ? r + n : r;
}

// Weight kernels.  Each edge is addressed by an absolute key so that draws
// are reproducible and independent of the sampled box.  `wrap_box` carries
// the fundamental domain for torus windows; Z^d semantics otherwise.
double kernel_weight(const EnvironmentSpec& spec, const LatticePoint& x, int dir,
                     const GridGeometry* wrap_box) {
  const int d = spec.d;
  const int axis = dir < d ? dir : dir - d;
  const bool negative = dir >= d;
  const auto draw = [&](std::span<const int64_t> key) {
    return spec.distribution.quantile(rng::uniform01(rng::stream(spec.seed, key)), axis);
  };
  const auto wrapped = [&](LatticePoint v) {
    if (wrap_box != nullptr)
      for (int a = 0; a < d; ++a) v[a] = wrap(v[a] - wrap_box->lo[a], wrap_box->extent[a]) + wrap_box->lo[a];
    return v;
  };

  switch (spec.kind) {
    case EnvironmentSpec::Kind::IidEdges: {
      LatticePoint w = wrapped(x);
      std::vector<int64_t> key(w.begin(), w.end());
      key.push_back(dir);
      return draw(key);
    }
    case EnvironmentSpec::Kind::IidUndirected:
    case EnvironmentSpec::Kind::Periodic: {
      LatticePoint base = x;
      if (negative) base[axis] -= 1;  // canonical endpoint of the undirected edge
      base = wrapped(base);
      if (spec.kind == EnvironmentSpec::Kind::Periodic)
        for (int a = 0; a < d; ++a) base[a] = wrap(base[a], spec.period[a]);
      std::vector<int64_t> key(base.begin(), base.end());
      key.push_back(axis);
      return draw(key);
    }
    case EnvironmentSpec::Kind::HyperplaneSymmetric: {
      LatticePoint w = wrapped(x);
      int64_t level = 0;
      for (int v : w) level += v;
      if (negative) level -= 1;
      if (wrap_box != nullptr) level = wrap64(level, wrap_box->extent[0]);
      const int64_t key[1] = {level};
      return draw(key);
    }
    case EnvironmentSpec::Kind::Explicit: {
      LatticePoint w = wrapped(x);
      return spec.table->weight_at(w, dir);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

double environment_weight(const EnvironmentSpec& spec, const LatticePoint& x, int dir) {
  return kernel_weight(spec, x, dir, nullptr);
}

EnvironmentWindow::EnvironmentWindow(EnvironmentSpec spec, GridGeometry geom)
    : spec_(std::move(spec)), geom_(std::move(geom)) {
  spec_.validate();
  if (geom_.d != spec_.d) throw std::invalid_argument("window rank does not match medium");
  const int nd = 2 * geom_.d;
  const GridGeometry* wrap_box = geom_.topology == Topology::Torus ? &geom_ : nullptr;
  if (geom_.topology == Topology::Torus) {
    if (spec_.kind == EnvironmentSpec::Kind::HyperplaneSymmetric) {
      for (int a = 1; a < geom_.d; ++a)
        if (geom_.extent[a] != geom_.extent[0])
          throw std::invalid_argument("hyperplane-symmetric torus windows must be square");
    }
    if (spec_.kind == EnvironmentSpec::Kind::Periodic) {
      for (int a = 0; a < geom_.d; ++a)
        if (geom_.extent[a] % spec_.period[a] != 0)
          throw std::invalid_argument("torus extents must be multiples of the period");
    }
  }
  weights_.assign(static_cast<size_t>(geom_.cells()) * nd, kNan);
  for (int64_t idx = 0; idx < geom_.cells(); ++idx) {
    LatticePoint x = geom_.point(idx);
    for (int dir = 0; dir < nd; ++dir) {
      if (geom_.topology == Topology::OpenBox && geom_.neighbor(idx, dir) < 0) continue;
      double w = kernel_weight(spec_, x, dir, wrap_box);
      if (std::isnan(w)) throw std::invalid_argument("medium does not define a needed edge weight");
      weights_[static_cast<size_t>(idx) * nd + dir] = w;
    }
  }
}

double EnvironmentWindow::weight(const LatticePoint& x, int dir) const {
  int64_t idx = geom_.index(x);
  if (geom_.topology == Topology::OpenBox && geom_.neighbor(idx, dir) < 0)
    throw std::out_of_range("edge leaves the open-box window");
  return weights_[static_cast<size_t>(idx) * 2 * geom_.d + dir];
}

BoundsReport EnvironmentWindow::verify_bounds() const {
  BoundsSpec bb = bounds();
  BoundsReport r;
  r.min_seen = std::numeric_limits<double>::infinity();
  r.max_seen = -std::numeric_limits<double>::infinity();
  r.ok = true;
  for (double w : weights_) {
    if (std::isnan(w)) continue;  // outward open-box slots are not edges
    r.min_seen = std::min(r.min_seen, w);
    r.max_seen = std::max(r.max_seen, w);
    if (w < bb.a || w > bb.b) r.ok = false;
  }
  return r;
}

uint64_t EnvironmentWindow::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (double w : weights_) {
    uint64_t bits = std::bit_cast<uint64_t>(w);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

EnvironmentWindow sample_window(const EnvironmentSpec& spec, const std::vector<int>& extent,
                                Topology topology, const std::optional<std::vector<int>>& lo) {
  if (static_cast<int>(extent.size()) != spec.d) throw std::invalid_argument("extent rank mismatch");
  std::vector<int> base;
  if (lo.has_value()) {
    base = *lo;
    if (topology == Topology::Torus)
      for (int v : base)
        if (v != 0) throw std::invalid_argument("torus windows are based at the origin");
  } else if (topology == Topology::Torus) {
    base.assign(spec.d, 0);
  } else {
    base.resize(spec.d);
    for (int a = 0; a < spec.d; ++a) base[a] = -extent[a] / 2;
  }
  return EnvironmentWindow(spec, GridGeometry(base, extent, topology));
}

ExplicitTable load_explicit_csv(const std::string& path, int d, BoundsSpec declared) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open explicit medium file: " + path);
  struct Row {
    LatticePoint x;
    int dir;
    double w;
  };
  std::vector<Row> rows;
  std::string line;
  std::vector<int> mins(d, std::numeric_limits<int>::max()), maxs(d, std::numeric_limits<int>::min());
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != static_cast<size_t>(d) + 2)
      throw std::invalid_argument("explicit medium row needs d coordinates, direction, weight");
    Row r;
    r.x.resize(d);
    try {
      for (int a = 0; a < d; ++a) r.x[a] = std::stoi(fields[a]);
      int sd = std::stoi(fields[d]);
      if (sd == 0 || std::abs(sd) > d) throw std::invalid_argument("bad direction");
      r.dir = sd > 0 ? sd - 1 : d + (-sd - 1);
      r.w = std::stod(fields[d + 1]);
    } catch (const std::exception&) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw std::invalid_argument("cannot parse explicit medium row: " + line);
    }
    first = false;
    for (int a = 0; a < d; ++a) {
      mins[a] = std::min(mins[a], r.x[a]);
      maxs[a] = std::max(maxs[a], r.x[a]);
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::invalid_argument("explicit medium file has no rows");
  std::vector<int> extent(d);
  for (int a = 0; a < d; ++a) extent[a] = maxs[a] - mins[a] + 1;
  ExplicitTable t;
  t.box = GridGeometry(mins, extent, Topology::OpenBox);
  t.declared = declared;
  t.weights.assign(static_cast<size_t>(t.box.cells()) * 2 * d, kNan);
  for (const Row& r : rows) t.weights[t.box.index(r.x) * 2 * d + r.dir] = r.w;
  return t;
}

}  // namespace fpct
