#include "fpct/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fpct/lattice.hpp"

namespace fpct {

void NormTable::validate() const {
  if (directions.empty()) throw std::invalid_argument("norm table is empty");
  const size_t n = directions.size();
  if (values.size() != n || tolerances.size() != n || provenance.size() != n)
    throw std::invalid_argument("norm table columns have mismatched lengths");
  const size_t d = directions[0].size();
  for (const auto& p : directions)
    if (p.size() != d) throw std::invalid_argument("norm table directions have mixed dimensions");
  for (double v : values)
    if (!(v > 0) || !std::isfinite(v))
      throw std::invalid_argument("norm table values must be positive and finite");
}

NormTable build_norm_table_2d(const NormEvaluator& H, double mesh_gap, double tolerance,
                              const std::string& provenance) {
  if (!(mesh_gap > 0)) throw std::invalid_argument("mesh gap must be positive");
  const int n = std::max(4, static_cast<int>(std::llround(2.0 * std::numbers::pi / mesh_gap)));
  NormTable table;
  table.directions.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    std::vector<double> p = {std::cos(theta), std::sin(theta)};
    table.values.push_back(H(p));
    table.directions.push_back(std::move(p));
    table.tolerances.push_back(tolerance);
    table.provenance.push_back(provenance);
  }
  table.validate();
  return table;
}

NormAxiomReport check_norm_axioms(const NormEvaluator& H, int d, const BoundsSpec& bounds,
                                  const NormAxiomOptions& opts) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  NormAxiomReport report;
  std::mt19937_64 gen(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_vec = [&] {
    std::vector<double> p(d);
    double norm = 0;
    do {
      norm = 0;
      for (double& c : p) {
        c = unit(gen);
        norm += c * c;
      }
    } while (norm < 1e-4);
    return p;
  };
  for (int it = 0; it < opts.triangle_pairs; ++it) {
    std::vector<double> p = random_vec(), q = random_vec(), s(d);
    for (int i = 0; i < d; ++i) s[i] = p[i] + q[i];
    const double hp = H(p), hq = H(q), hs = H(s);
    report.worst_triangle = std::max(report.worst_triangle, hs - hp - hq);
    for (double lambda : opts.lambdas) {
      std::vector<double> lp(d);
      for (int i = 0; i < d; ++i) lp[i] = lambda * p[i];
      report.worst_homogeneity =
          std::max(report.worst_homogeneity, std::abs(H(lp) - lambda * hp));
    }
    const double lower = sup_norm(p) / bounds.b;
    report.worst_lower_gap = std::max(report.worst_lower_gap, lower - hp);
    if (!(hp > 0)) report.ok = false;
    ++report.checked_pairs;
  }
  if (report.worst_homogeneity > opts.tol) report.ok = false;
  if (report.worst_triangle > opts.tol) report.ok = false;
  if (report.worst_lower_gap > opts.tol) report.ok = false;
  return report;
}

DualNormValue dual_norm(const NormTable& table, std::span<const double> x,
                        const BoundsSpec& bounds) {
  table.validate();
  if (static_cast<int>(x.size()) != table.dim())
    throw std::invalid_argument("dual norm argument has wrong dimension");
  DualNormValue out;
  double x2 = 0;
  for (double c : x) x2 += c * c;
  x2 = std::sqrt(x2);
  double hmin = table.values[0];
  // Mesh gap: largest angular distance from any direction to its nearest
  // table entry.  For the uniform 2-d mesh of n entries this is pi/n.
  const size_t n = table.directions.size();
  for (size_t k = 0; k < n; ++k) {
    double dot = 0;
    for (size_t i = 0; i < x.size(); ++i) dot += table.directions[k][i] * x[i];
    out.value = std::max(out.value, dot / table.values[k]);
    hmin = std::min(hmin, table.values[k]);
  }
  const double theta = std::numbers::pi / static_cast<double>(n);
  // Moving the maximizing direction by an angle up to theta changes p.x by at
  // most |x|_2 * theta and H(p) by at most theta / a (Lipschitz in p), so the
  // true supremum exceeds the tabulated maximum by at most this slack.
  out.slack = theta * (x2 + out.value / bounds.a) / hmin;
  return out;
}

namespace {

struct HalfPlane {
  double nx, ny, c;  // nx*x + ny*y <= c
};

}  // namespace

std::vector<std::array<double, 2>> limit_shape(const NormTable& table) {
  table.validate();
  if (table.dim() != 2) throw std::invalid_argument("limit shape extraction requires d = 2");
  std::vector<HalfPlane> planes;
  planes.reserve(table.directions.size());
  for (size_t k = 0; k < table.directions.size(); ++k) {
    const double norm = std::hypot(table.directions[k][0], table.directions[k][1]);
    if (norm < 1e-12) throw std::invalid_argument("zero direction in norm table");
    planes.push_back({table.directions[k][0] / norm, table.directions[k][1] / norm,
                      table.values[k] / norm});
  }
  // Candidate vertices: pairwise boundary intersections that satisfy every
  // other constraint (with a small feasibility slack for grazing triples).
  std::vector<std::array<double, 2>> pts;
  const double eps = 1e-9;
  for (size_t i = 0; i < planes.size(); ++i) {
    for (size_t j = i + 1; j < planes.size(); ++j) {
      const double det = planes[i].nx * planes[j].ny - planes[i].ny * planes[j].nx;
      if (std::abs(det) < 1e-12) continue;
      const double x = (planes[i].c * planes[j].ny - planes[j].c * planes[i].ny) / det;
      const double y = (planes[i].nx * planes[j].c - planes[j].nx * planes[i].c) / det;
      bool feasible = true;
      for (const auto& h : planes) {
        if (h.nx * x + h.ny * y > h.c + eps) {
          feasible = false;
          break;
        }
      }
      if (feasible) pts.push_back({x, y});
    }
  }
  if (pts.size() < 3) throw std::runtime_error("limit shape polygon is degenerate");
  // Convex hull (monotone chain), counterclockwise output.
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return std::abs(a[0] - b[0]) < 1e-9 && std::abs(a[1] - b[1]) < 1e-9;
                        }),
            pts.end());
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-15) --k;
    hull[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 1e-15) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace fpct
