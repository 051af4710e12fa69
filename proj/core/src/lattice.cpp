#include "fpct/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fpct {

DirectionSet::DirectionSet(int dim) : d(dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

LatticePoint DirectionSet::vec(int dir) const {
  LatticePoint v(d, 0);
  v[axis(dir)] = sign(dir);
  return v;
}

void DirectionSet::step_inplace(LatticePoint& x, int dir) const {
  x[axis(dir)] += sign(dir);
}

double dot_direction(std::span<const double> p, int dir, int d) {
  return dir < d ? p[dir] : -p[dir - d];
}

int64_t l1_norm(const LatticePoint& x) {
  int64_t s = 0;
  for (int v : x) s += std::abs(static_cast<int64_t>(v));
  return s;
}

double sup_norm(std::span<const double> p) {
  double m = 0;
  for (double v : p) m = std::max(m, std::abs(v));
  return m;
}

LatticePoint round_to_lattice(const std::vector<double>& x) {
  LatticePoint out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    double v = x[i];
    double t = std::trunc(v);
    if (std::abs(v - t) == 0.5) {
      out[i] = static_cast<int>(t);  // half away from an integer: toward zero
    } else {
      out[i] = static_cast<int>(std::lround(v));
    }
  }
  return out;
}

std::string topology_name(Topology t) {
  return t == Topology::OpenBox ? "open-box" : "torus";
}

GridGeometry::GridGeometry(std::vector<int> lo_, std::vector<int> extent_, Topology topo)
    : d(static_cast<int>(extent_.size())), lo(std::move(lo_)), extent(std::move(extent_)), topology(topo) {
  if (d < 1) throw std::invalid_argument("box must have at least one axis");
  if (lo.size() != extent.size()) throw std::invalid_argument("box lo/extent rank mismatch");
  for (int e : extent)
    if (e < 1) throw std::invalid_argument("box extent must be positive");
  stride_.assign(d, 1);
  total_ = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride_[a] = total_;
    total_ *= extent[a];
  }
}

bool GridGeometry::inside(const LatticePoint& x) const {
  if (static_cast<int>(x.size()) != d) return false;
  for (int a = 0; a < d; ++a)
    if (x[a] < lo[a] || x[a] >= lo[a] + extent[a]) return false;
  return true;
}

namespace {
inline int wrap(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}
}  // namespace

int64_t GridGeometry::index(const LatticePoint& x) const {
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("point rank mismatch");
  int64_t idx = 0;
  for (int a = 0; a < d; ++a) {
    int c = x[a] - lo[a];
    if (topology == Topology::Torus) {
      c = wrap(c, extent[a]);
    } else if (c < 0 || c >= extent[a]) {
      throw std::out_of_range("lattice point outside open-box window");
    }
    idx += stride_[a] * c;
  }
  return idx;
}

LatticePoint GridGeometry::point(int64_t idx) const {
  LatticePoint x(d);
  for (int a = 0; a < d; ++a) x[a] = lo[a] + static_cast<int>((idx / stride_[a]) % extent[a]);
  return x;
}

int64_t GridGeometry::neighbor(int64_t idx, int dir) const {
  int a = dir < d ? dir : dir - d;
  int s = dir < d ? +1 : -1;
  int c_old = static_cast<int>((idx / stride_[a]) % extent[a]);
  int c = c_old + s;
  if (c < 0 || c >= extent[a]) {
    if (topology == Topology::OpenBox) return -1;
    c = wrap(c, extent[a]);
  }
  return idx + stride_[a] * static_cast<int64_t>(c - c_old);
}

int GridGeometry::coordinate(int64_t idx, int axis) const {
  return lo[axis] + static_cast<int>((idx / stride_[axis]) % extent[axis]);
}

bool GridGeometry::on_boundary(int64_t idx) const {
  for (int a = 0; a < d; ++a) {
    int c = static_cast<int>((idx / stride_[a]) % extent[a]);
    if (c == 0 || c == extent[a] - 1) return true;
  }
  return false;
}

bool GridGeometry::same_shape(const GridGeometry& other) const {
  return d == other.d && lo == other.lo && extent == other.extent && topology == other.topology;
}

GridGeometry centered_box(int d, int radius) {
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  std::vector<int> lo(d, -radius), extent(d, 2 * radius + 1);
  return GridGeometry(std::move(lo), std::move(extent), Topology::OpenBox);
}

}  // namespace fpct
