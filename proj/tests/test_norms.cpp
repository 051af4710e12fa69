#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpct/norms.hpp"
#include "fpct/symmin.hpp"

using namespace fpct;

namespace {

NormEvaluator scaled_linf(double c) {
  return [c](std::span<const double> p) {
    double m = 0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m / c;
  };
}

NormEvaluator algorithm_norm(AtomicMedium medium) {
  return [medium = std::move(medium)](std::span<const double> p) {
    return run_algorithm(medium, p, 200000, 1e-12).hbar;
  };
}

double corner_distance(const std::array<double, 2>& v,
                       const std::vector<std::array<double, 2>>& corners) {
  double best = 1e300;
  for (const auto& c : corners)
    best = std::min(best, std::hypot(v[0] - c[0], v[1] - c[1]));
  return best;
}

}  // namespace

TEST_CASE("norm axioms hold exactly for a homogeneous evaluator") {
  BoundsSpec bounds(2.0, 2.0);
  NormAxiomReport rep = check_norm_axioms(scaled_linf(2.0), 2, bounds);
  CHECK(rep.ok);
  CHECK(rep.worst_homogeneity <= 1e-12);
  CHECK(rep.worst_triangle <= 1e-12);
  CHECK(rep.worst_lower_gap <= 1e-12);
  CHECK(rep.checked_pairs == 100);
}

TEST_CASE("norm axioms hold for the variational evaluator") {
  AtomicMedium medium(2, {{1.0, 2.0}, {2.0, 1.0}}, {0.5, 0.5});
  NormEvaluator H = algorithm_norm(medium);
  NormAxiomOptions opts;
  opts.seed = 7;
  NormAxiomReport rep = check_norm_axioms(H, 2, medium.bounds(), opts);
  CHECK(rep.ok);

  // Spot checks mirroring the report.
  const std::vector<double> e1 = {1.0, 0.0};
  const std::vector<double> e2 = {0.0, 1.0};
  const std::vector<double> e12 = {1.0, 1.0};
  const std::vector<double> e1x2 = {2.0, 0.0};
  CHECK(std::abs(H(e1x2) - 2.0 * H(e1)) <= 1e-9);
  CHECK(H(e12) <= H(e1) + H(e2) + 1e-9);
  CHECK(H(e1) >= 1.0 / medium.bounds().b - 1e-12);
}

TEST_CASE("2d norm tables sample a uniform angular mesh") {
  NormTable t = build_norm_table_2d(scaled_linf(1.0), std::numbers::pi / 2, 1e-9, "closed-form");
  REQUIRE(t.directions.size() == 4);
  CHECK(t.values[0] == doctest::Approx(1.0));
  CHECK(t.provenance[0] == "closed-form");
  t.validate();
  CHECK_THROWS_AS(build_norm_table_2d(scaled_linf(1.0), 0.0, 1e-9, "x"), std::invalid_argument);
}

TEST_CASE("dual norm recovers the homogeneous time-constant") {
  for (double c : {1.0, 2.5}) {
    NormTable t = build_norm_table_2d(scaled_linf(c), std::numbers::pi / 128, 1e-10, "closed-form");
    const std::vector<double> e1 = {1.0, 0.0};
    DualNormValue L = dual_norm(t, e1, BoundsSpec(c, c));
    CHECK(L.value == doctest::Approx(c).epsilon(1e-9));
    CHECK(L.slack >= 0.0);
    const std::vector<double> zero = {0.0, 0.0};
    CHECK(dual_norm(t, zero, BoundsSpec(c, c)).value == 0.0);
  }
}

TEST_CASE("d=1 dual table recovers the mean passage time") {
  NormTable t;
  t.directions = {{1.0}};
  t.values = {2.0 / 3.0};
  t.tolerances = {1e-9};
  t.provenance = {"analytic"};
  DualNormValue L = dual_norm(t, std::vector<double>{1.0}, BoundsSpec(1.0, 2.0));
  CHECK(L.value == doctest::Approx(1.5));
}

TEST_CASE("limit shape of the unit homogeneous medium is the l1 square") {
  NormTable t = build_norm_table_2d(scaled_linf(1.0), std::numbers::pi / 256, 1e-10, "closed-form");
  auto poly = limit_shape(t);
  REQUIRE(poly.size() >= 3);
  const std::vector<std::array<double, 2>> corners = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& v : poly) CHECK(corner_distance(v, corners) <= 1e-6);
  for (const auto& c : corners) {
    double best = 1e300;
    for (const auto& v : poly) best = std::min(best, std::hypot(v[0] - c[0], v[1] - c[1]));
    CHECK(best <= 1e-6);
  }
}

TEST_CASE("doubling the medium weight halves the limit shape") {
  // Weight c slows travel by c, so the reachable-per-unit-time set is the l1
  // ball of radius 1/c.
  NormTable t = build_norm_table_2d(scaled_linf(2.0), std::numbers::pi / 256, 1e-10, "closed-form");
  auto poly = limit_shape(t);
  const std::vector<std::array<double, 2>> corners = {{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}};
  for (const auto& v : poly) CHECK(corner_distance(v, corners) <= 1e-6);
}

TEST_CASE("limit shape of a symmetric medium is convex and bounded by the norm bounds") {
  AtomicMedium medium(2, {{1.0, 2.0}, {2.0, 1.0}}, {0.5, 0.5});
  NormTable t = build_norm_table_2d(algorithm_norm(medium), std::numbers::pi / 64, 1e-10,
                                    "sym-minimize");
  auto poly = limit_shape(t);
  REQUIRE(poly.size() >= 4);
  const double a = medium.bounds().a, b = medium.bounds().b;
  for (const auto& v : poly) {
    // Contained in the l1 ball of radius 1/a.
    CHECK(std::abs(v[0]) + std::abs(v[1]) <= 1.0 / a + 1e-9);
  }
  // Contains the l1 ball of radius 1/b: its extreme points satisfy every
  // tabulated half-plane constraint.
  for (const auto& c : std::vector<std::array<double, 2>>{{1 / b, 0}, {0, 1 / b}, {-1 / b, 0}, {0, -1 / b}})
    for (size_t k = 0; k < t.directions.size(); ++k)
      CHECK(t.directions[k][0] * c[0] + t.directions[k][1] * c[1] <= t.values[k] + 1e-9);
  // Convexity: consistent cross-product sign around the hull.
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& o = poly[i];
    const auto& u = poly[(i + 1) % n];
    const auto& w = poly[(i + 2) % n];
    double cross = (u[0] - o[0]) * (w[1] - o[1]) - (u[1] - o[1]) * (w[0] - o[0]);
    CHECK(cross >= -1e-12);
  }
}

TEST_CASE("duality roundtrip recovers the evaluator on the axes") {
  AtomicMedium medium(2, {{1.0, 2.0}, {2.0, 1.0}}, {0.5, 0.5});
  NormEvaluator H = algorithm_norm(medium);
  NormTable table_H = build_norm_table_2d(H, std::numbers::pi / 256, 1e-10, "sym-minimize");
  BoundsSpec bounds = medium.bounds();

  NormTable table_L;
  table_L.directions = table_H.directions;
  double worst_slack = 0;
  for (const auto& x : table_H.directions) {
    DualNormValue L = dual_norm(table_H, x, bounds);
    table_L.values.push_back(L.value);
    table_L.tolerances.push_back(L.slack);
    table_L.provenance.push_back("dual");
    worst_slack = std::max(worst_slack, L.slack);
  }

  const std::vector<double> e1 = {1.0, 0.0};
  DualNormValue back = dual_norm(table_L, e1, bounds);
  CHECK(std::abs(back.value - H(e1)) <= 2.0 * std::max(worst_slack, back.slack) + 1e-9);
}

TEST_CASE("norm tables validate their shape") {
  NormTable empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  NormTable bad;
  bad.directions = {{1.0, 0.0}};
  bad.values = {-1.0};
  bad.tolerances = {1e-9};
  bad.provenance = {"x"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
