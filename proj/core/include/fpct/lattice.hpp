#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpct {

using LatticePoint = std::vector<int>;

// The 2d unit steps on Z^d.  Direction index i in [0, d) is +e_i, index
// d + i is -e_i.
struct DirectionSet {
  int d = 0;

  explicit DirectionSet(int dim);
  int count() const { return 2 * d; }
  int axis(int dir) const { return dir < d ? dir : dir - d; }
  int sign(int dir) const { return dir < d ? +1 : -1; }
  int opposite(int dir) const { return dir < d ? dir + d : dir - d; }
  LatticePoint vec(int dir) const;
  void step_inplace(LatticePoint& x, int dir) const;
};

// p . alpha for a unit step alpha given by direction index.
double dot_direction(std::span<const double> p, int dir, int d);

int64_t l1_norm(const LatticePoint& x);
double sup_norm(std::span<const double> p);

// Nearest lattice point; a coordinate exactly halfway between two integers
// rounds toward zero.
LatticePoint round_to_lattice(const std::vector<double>& x);

enum class Topology { OpenBox, Torus };

std::string topology_name(Topology t);

// Axis-aligned box of lattice cells [lo, lo + extent), linearized row-major
// (last axis fastest), which makes the linear order lexicographic.
struct GridGeometry {
  int d = 0;
  std::vector<int> lo;
  std::vector<int> extent;
  Topology topology = Topology::OpenBox;

  GridGeometry() = default;
  GridGeometry(std::vector<int> lo_, std::vector<int> extent_, Topology topo);

  int64_t cells() const { return total_; }
  bool inside(const LatticePoint& x) const;
  // Linear index of x.  Torus geometries wrap coordinates; open boxes throw
  // std::out_of_range for points outside.
  int64_t index(const LatticePoint& x) const;
  LatticePoint point(int64_t idx) const;
  // Index of the cell one step from idx, or -1 past an open-box face.
  int64_t neighbor(int64_t idx, int dir) const;
  int coordinate(int64_t idx, int axis) const;
  bool on_boundary(int64_t idx) const;
  bool same_shape(const GridGeometry& other) const;

 private:
  std::vector<int64_t> stride_;
  int64_t total_ = 0;
};

// Centered open box: extents 2*radius+1 per axis, origin in the middle.
GridGeometry centered_box(int d, int radius);

}  // namespace fpct
