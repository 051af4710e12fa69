#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <vector>

#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"
#include "fpct/lattice.hpp"
#include "fpct/rng.hpp"
#include "fpct/validation.hpp"

using namespace fpct;

namespace {

ExplicitTable random_table_2d(int nx, int ny, uint64_t seed) {
  GridGeometry box({0, 0}, {nx, ny}, Topology::OpenBox);
  ExplicitTable t;
  t.box = box;
  t.declared = BoundsSpec(1.0, 2.0);
  t.weights.resize(static_cast<size_t>(box.cells()) * 4);
  for (size_t i = 0; i < t.weights.size(); ++i)
    t.weights[i] = 1.0 + rng::uniform01(rng::stream(seed, {static_cast<int64_t>(i)}));
  return t;
}

}  // namespace

TEST_CASE("constant medium passage times are c times the l1 distance") {
  for (double c : {1.0, 2.5}) {
    EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, c), centered_box(2, 5));
    PassageTimeMap map = first_passage_times(env, {0, 0});
    for (int64_t i = 0; i < env.cell_count(); ++i) {
      LatticePoint y = env.geometry().point(i);
      CHECK(map.times[i] == c * static_cast<double>(l1_norm(y)));
    }
    CHECK(map.at({0, 0}) == 0.0);
  }
}

TEST_CASE("d=1 passage times are prefix sums of the edge weights") {
  const int n = 6;
  GridGeometry box({0}, {n + 1}, Topology::OpenBox);
  ExplicitTable t;
  t.box = box;
  t.declared = BoundsSpec(1.0, 2.0);
  t.weights.assign(static_cast<size_t>(box.cells()) * 2, 1.0);
  std::vector<double> w = {1.25, 1.0, 1.75, 1.5, 2.0, 1.125};
  for (int i = 0; i < n; ++i) {
    t.weights[static_cast<size_t>(i) * 2 + 0] = w[i];       // +e1 out of i
    t.weights[static_cast<size_t>(i + 1) * 2 + 1] = w[i];   // -e1 back
  }
  EnvironmentWindow env(EnvironmentSpec::explicit_table(t), box);
  PassageTimeMap map = first_passage_times(env, {0});
  double run = 0;
  for (int i = 0; i < n; ++i) {
    run += w[i];
    CHECK(map.at({i + 1}) == run);
  }
}

TEST_CASE("passage times satisfy the edge relaxation inequality") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 12);
  EnvironmentWindow env = sample_window(spec, {7, 7}, Topology::OpenBox);
  PassageTimeMap map = first_passage_times(env, {0, 0});
  const GridGeometry& g = env.geometry();
  for (int64_t i = 0; i < g.cells(); ++i)
    for (int dir = 0; dir < 4; ++dir) {
      int64_t nb = g.neighbor(i, dir);
      if (nb < 0) continue;
      CHECK(map.times[nb] <= map.times[i] + env.weight_by_index(i, dir));
    }
}

TEST_CASE("small explicit windows match the exhaustive path oracle bitwise") {
  for (uint64_t seed : {101ull, 102ull, 103ull}) {
    for (int nx : {2, 3}) {
      ExplicitTable t = random_table_2d(nx, 3, seed);
      EnvironmentWindow env(EnvironmentSpec::explicit_table(t), t.box);
      for (int64_t s = 0; s < env.cell_count(); ++s) {
        LatticePoint src = env.geometry().point(s);
        PassageTimeMap fast = first_passage_times(env, src);
        PassageTimeMap slow = oracle_first_passage_times(env, src);
        for (int64_t i = 0; i < env.cell_count(); ++i) CHECK(fast.times[i] == slow.times[i]);
      }
    }
  }
}

TEST_CASE("reachable set basics") {
  EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, 1.0), centered_box(2, 6));

  SUBCASE("zero budget reaches only the start") {
    auto cells = reachable_set(env, {1, -1}, 0.0);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == LatticePoint{1, -1});
  }

  SUBCASE("constant medium reaches the closed l1 ball of radius floor(t)") {
    auto rep = reachable_with_times(env, {0, 0}, 2.5);
    CHECK_FALSE(rep.touches_boundary);
    std::set<LatticePoint> got;
    for (const auto& c : rep.cells) {
      got.insert(c.y);
      CHECK(c.time == static_cast<double>(l1_norm(c.y)));
    }
    std::set<LatticePoint> want;
    for (int x0 = -2; x0 <= 2; ++x0)
      for (int x1 = -2; x1 <= 2; ++x1)
        if (std::abs(x0) + std::abs(x1) <= 2) want.insert({x0, x1});
    CHECK(got == want);
  }

  SUBCASE("negative budget is rejected") {
    CHECK_THROWS_AS(reachable_set(env, {0, 0}, -1.0), std::invalid_argument);
  }
}

TEST_CASE("reachable sets grow with t and respect the speed bound") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 77);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  auto small = reachable_set(env, {2, 2}, 3.0);
  auto large = reachable_set(env, {2, 2}, 5.0);
  std::set<LatticePoint> large_set(large.begin(), large.end());
  for (const auto& y : small) CHECK(large_set.count(y) == 1);
  for (const auto& y : large) {
    LatticePoint rel = {y[0] - 2, y[1] - 2};
    CHECK(l1_norm(rel) <= 5.0 / env.bounds().a);
  }
}

TEST_CASE("round_to_lattice breaks ties toward zero coordinatewise") {
  CHECK(round_to_lattice({1.2, -0.7}) == LatticePoint{1, -1});
  CHECK(round_to_lattice({0.5, 0.5}) == LatticePoint{0, 0});
  CHECK(round_to_lattice({-0.5, 2.5}) == LatticePoint{0, 2});
  CHECK(round_to_lattice({-1.5}) == LatticePoint{-1});
}

TEST_CASE("constant medium time-constant estimates are exact with zero width") {
  for (double c : {1.0, 2.5}) {
    TimeConstantEstimate est =
        estimate_time_constant(EnvironmentSpec::constant(2, c), {1.0, 0.0}, {4, 8}, 3);
    CHECK(est.estimate == c);
    CHECK(est.half_width == 0.0);
    for (const auto& row : est.scaled)
      for (double v : row) CHECK(v == c);
  }
}

TEST_CASE("time-constant estimates respect the path-count bounds") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 21);
  std::vector<double> x = {1.0, 1.0};
  TimeConstantEstimate est = estimate_time_constant(spec, x, {4, 8}, 3);
  const double l1 = 2.0;
  CHECK(est.estimate >= spec.bounds().a * l1);
  CHECK(est.estimate <= spec.bounds().b * l1);
}

TEST_CASE("estimates are Lipschitz in the direction within confidence widths") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 33);
  EstimateOptions opts;
  opts.threads = 2;
  TimeConstantEstimate ex = estimate_time_constant(spec, {1.0, 0.0}, {8, 16}, 4, opts);
  TimeConstantEstimate exy = estimate_time_constant(spec, {1.0, 1.0}, {8, 16}, 4, opts);
  const double slack = ex.half_width + exy.half_width + 1e-12;
  CHECK(std::abs(ex.estimate - exy.estimate) <= spec.bounds().b * 1.0 + slack);
}

TEST_CASE("passage times are subadditive along a fixed realization") {
  // Dyadic atoms keep every path sum exact, so the inequality is tested
  // with no floating-point slack.
  auto spec = EnvironmentSpec::iid_edges(
      2,
      WeightDistribution::finite_atoms({{1.0}, {1.25}, {1.75}, {2.0}}, {0.25, 0.25, 0.25, 0.25}),
      42);
  const std::vector<double> x = {1.0, 1.0};
  const int m = 3, n = 4;
  LatticePoint mid = round_to_lattice({m * x[0], m * x[1]});
  LatticePoint far = round_to_lattice({(m + n) * x[0], (m + n) * x[1]});
  EnvironmentWindow env = sample_window(spec, {41, 41}, Topology::OpenBox);
  PassageTimeMap from0 = first_passage_times(env, {0, 0});
  PassageTimeMap fromMid = first_passage_times(env, mid);
  CHECK(from0.at(far) <= from0.at(mid) + fromMid.at(far));
}

TEST_CASE("d=1 two-atom estimate approaches the mean weight") {
  auto spec = EnvironmentSpec::iid_edges(
      1, WeightDistribution::finite_atoms({{1.0}, {2.0}}, {0.5, 0.5}), 2026);
  EstimateOptions opts;
  opts.threads = 2;
  TimeConstantEstimate est = estimate_time_constant(spec, {1.0}, {2000, 4000}, 6, opts);
  // LLN: m(1) = E[tau] = 1.5; the half-width is the 95% Student-t radius,
  // so allow three standard errors.
  const double se = est.half_width / 2.57;  // t_{.975,5} = 2.571
  CHECK(std::abs(est.estimate - 1.5) <= 3.0 * se + 1e-12);
}

TEST_CASE("degenerate estimate requests are rejected") {
  auto spec = EnvironmentSpec::constant(2, 1.0);
  CHECK_THROWS_AS(estimate_time_constant(spec, {0.0, 0.0}, {4}, 2), std::invalid_argument);
  CHECK_THROWS_AS(estimate_time_constant(spec, {1.0, 0.0}, {}, 2), std::invalid_argument);
  CHECK_THROWS_AS(estimate_time_constant(spec, {1.0}, {4}, 2), std::invalid_argument);
}

TEST_CASE("paths report weights in traversal order") {
  EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, 2.5), centered_box(2, 3));
  Path path;
  path.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(path.valid_steps());
  CHECK(path.weight(env) == 7.5);
  Path bad;
  bad.vertices = {{0, 0}, {1, 1}};
  CHECK_FALSE(bad.valid_steps());
}
