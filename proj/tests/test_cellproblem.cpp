#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpct/cellproblem.hpp"
#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"
#include "fpct/lattice.hpp"
#include "fpct/rng.hpp"
#include "fpct/validation.hpp"

using namespace fpct;

namespace {

using V = std::vector<double>;

LatticeFunction linear_function(const GridGeometry& g, const std::vector<double>& grad) {
  LatticeFunction f = LatticeFunction::zeros(g);
  for (int64_t i = 0; i < g.cells(); ++i) {
    LatticePoint x = g.point(i);
    double v = 0;
    for (size_t a = 0; a < grad.size(); ++a) v += grad[a] * x[a];
    f.values[i] = v;
  }
  return f;
}

LatticeFunction random_function(const GridGeometry& g, uint64_t seed, double scale) {
  LatticeFunction f = LatticeFunction::zeros(g);
  for (int64_t i = 0; i < g.cells(); ++i)
    f.values[i] = scale * (2.0 * rng::uniform01(rng::stream(seed, {i})) - 1.0);
  return f;
}

}  // namespace

TEST_CASE("discrete Hamiltonian closed forms") {
  EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, 2.0), centered_box(2, 3));
  LatticeFunction zero = LatticeFunction::zeros(env.geometry());

  const std::vector<double> p = {1.0, 0.0};
  CHECK(discrete_hamiltonian(zero, p, {0, 0}, env) == 0.5);

  const std::vector<double> p0 = {0.0, 0.0};
  CHECK(discrete_hamiltonian(zero, p0, {1, -1}, env) == 0.0);

  // A linear function with gradient -p is an exact corrector: H = 0.
  const std::vector<double> pd = {0.5, -0.25};
  LatticeFunction lin = linear_function(env.geometry(), {-pd[0], -pd[1]});
  for (const LatticePoint& x : {LatticePoint{0, 0}, LatticePoint{1, 1}, LatticePoint{-2, 0}})
    CHECK(discrete_hamiltonian(lin, pd, x, env) == 0.0);

  CHECK_THROWS_AS(discrete_hamiltonian(zero, V{1.0}, {0, 0}, env), std::invalid_argument);
  CHECK_THROWS_AS(discrete_hamiltonian(zero, p, {3, 0}, env), std::out_of_range);
}

TEST_CASE("lattice function Lipschitz norm is the largest neighbor difference") {
  GridGeometry open({-2, -2}, {5, 5}, Topology::OpenBox);
  CHECK(linear_function(open, {1.0, 0.0}).lipschitz_norm() == 1.0);
  CHECK(linear_function(open, {0.5, -2.0}).lipschitz_norm() == 2.0);
  // On a torus the seam jump counts.
  GridGeometry torus({0, 0}, {3, 3}, Topology::Torus);
  CHECK(linear_function(torus, {1.0, 0.0}).lipschitz_norm() == 2.0);
}

TEST_CASE("stationary solve on a constant medium hits the closed form") {
  EnvironmentWindow env = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  const std::vector<double> p = {1.0, 0.0};
  CellField field = solve_stationary(env, p, 0.1, 1e-12);
  const double expected = -1.0 / (1.0 - std::exp(-0.1));
  for (double v : field.nu.values) {
    CHECK(v == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(v - (-10.50833)) <= 5e-6);  // five printed decimals
  }
  CHECK(field.residual <= 1e-12);
  CHECK(field.sweeps >= 1);
}

TEST_CASE("stationary solve with zero momentum stays identically zero") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 3);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  CellField field = solve_stationary(env, V{0.0, 0.0}, 0.2, 1e-10);
  for (double v : field.nu.values) CHECK(v == 0.0);
  CHECK(check_hjb_residual(field, env) == 0.0);
}

TEST_CASE("stationary field obeys the discrete value bounds and Lipschitz bound") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 13);
  EnvironmentWindow env = sample_window(spec, {8, 8}, Topology::Torus);
  const std::vector<double> p = {1.0, 0.5};
  const double pinf = 1.0;
  const BoundsSpec bb = env.bounds();
  for (double eps : {0.2, 0.05}) {
    CellField field = solve_stationary(env, p, eps, 1e-11);
    // Constant sub/supersolutions of the DPP pin the fixed point between
    // the two geometric-series values.
    const double lo = -pinf / (1.0 - std::exp(-eps * bb.a));
    const double hi = -pinf / (1.0 - std::exp(-eps * bb.b));
    for (double v : field.nu.values) {
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
    // One half of the small-eps bound holds at every eps.
    CHECK(eps * field.nu.at({0, 0}) <= -pinf / bb.b + 1e-12);
    CHECK(field.nu.lipschitz_norm() <= (bb.a + bb.b) / bb.a * pinf + 1e-9);
  }
}

TEST_CASE("stationary sweeps contract at rate exp(-eps a)") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 29);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  CellField field = solve_stationary(env, V{1.0, 0.0}, 0.15, 1e-10);
  const double q = std::exp(-0.15 * env.bounds().a);
  for (size_t k = 0; k + 1 < field.sweep_diffs.size(); ++k) {
    if (field.sweep_diffs[k] == 0.0) break;
    CHECK(field.sweep_diffs[k + 1] <= q * field.sweep_diffs[k] * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("stationary solver validates its inputs") {
  EnvironmentWindow open = EnvironmentWindow(EnvironmentSpec::constant(2, 1.0), centered_box(2, 2));
  CHECK_THROWS_AS(solve_stationary(open, V{1.0, 0.0}, 0.1, 1e-10), std::invalid_argument);
  EnvironmentWindow torus = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  CHECK_THROWS_AS(solve_stationary(torus, V{1.0, 0.0}, 0.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(solve_stationary(torus, V{1.0, 0.0}, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("HJB residual scales linearly in eps") {
  const std::vector<double> ladder = {0.2, 0.1, 0.05, 0.025};

  SUBCASE("constant medium") {
    EnvironmentWindow env =
        sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
    double lo = 1e300, hi = 0;
    for (double eps : ladder) {
      CellField field = solve_stationary(env, V{1.0, 0.0}, eps, 1e-11);
      double ratio = check_hjb_residual(field, env) / eps;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 4.0);
  }

  SUBCASE("two-atom d=1 medium of period 2") {
    auto spec = EnvironmentSpec::periodic(
        {2}, WeightDistribution::finite_atoms({{1.0}, {2.0}}, {0.5, 0.5}), 4);
    EnvironmentWindow env = sample_window(spec, {2}, Topology::Torus);
    double lo = 1e300, hi = 0;
    for (double eps : ladder) {
      CellField field = solve_stationary(env, V{1.0}, eps, 1e-12);
      double ratio = check_hjb_residual(field, env) / eps;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 4.0);
  }
}

TEST_CASE("stationary ladder extrapolates the constant medium to 1") {
  EnvironmentWindow env = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  StationaryLadderResult r =
      estimate_Hbar_stationary(env, V{1.0, 0.0}, {0.2, 0.1, 0.05, 0.025}, 1e-12);
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[1].epsilon == 0.1);
  CHECK(r.points[1].value == doctest::Approx(0.1 / (1.0 - std::exp(-0.1))).epsilon(1e-9));
  CHECK(std::abs(r.points[1].value - 1.050833) <= 1e-5);
  CHECK(std::abs(r.extrapolated - 1.0) <= 5e-3);

  StationaryLadderResult zero = estimate_Hbar_stationary(env, V{0.0, 0.0}, {0.2, 0.1}, 1e-12);
  for (const auto& pt : zero.points) CHECK(pt.value == 0.0);
  CHECK(zero.extrapolated == 0.0);
}

TEST_CASE("d=1 two-atom stationary ladder approaches the corrector value 2/3") {
  auto spec = EnvironmentSpec::iid_edges(
      1, WeightDistribution::finite_atoms({{1.0}, {2.0}}, {0.5, 0.5}), 71);
  EnvironmentWindow env = sample_window(spec, {64}, Topology::Torus);
  StationaryLadderResult r = estimate_Hbar_stationary(env, V{1.0}, {0.2, 0.1, 0.05, 0.025}, 1e-11);
  CHECK(std::abs(r.extrapolated - 2.0 / 3.0) <= 0.05);
}

TEST_CASE("finite-horizon closed forms") {
  EnvironmentWindow env = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  LatticeFunction zero = LatticeFunction::zeros(env.geometry());
  const std::vector<double> p = {1.0, 0.0};

  HorizonValue h = solve_finite_horizon(env, p, {0, 0}, 5.0, zero);
  CHECK(h.value == -5.0);
  CHECK(h.argmin == LatticePoint{-5, 0});

  LatticeFunction mu0 = random_function(env.geometry(), 9, 1.0);
  HorizonValue at_zero = solve_finite_horizon(env, p, {1, 2}, 0.0, mu0);
  CHECK(at_zero.value == mu0.at({1, 2}));
  CHECK(at_zero.argmin == LatticePoint{1, 2});

  // Value bounds: empty move is admissible; speed bound caps the gain.
  HorizonValue mid = solve_finite_horizon(env, p, {0, 0}, 3.5, mu0);
  CHECK(mid.value <= mu0.at({0, 0}));
  double mu0_min = mu0.values[0];
  for (double v : mu0.values) mu0_min = std::min(mu0_min, v);
  CHECK(mid.value >= -1.0 * 3.5 / env.bounds().a + mu0_min - 1e-12);
}

TEST_CASE("finite horizon equals the exhaustive oracle on a 3x3 torus") {
  GridGeometry box({0, 0}, {3, 3}, Topology::OpenBox);
  ExplicitTable t;
  t.box = box;
  t.declared = BoundsSpec(1.0, 2.0);
  t.weights.resize(static_cast<size_t>(box.cells()) * 4);
  for (size_t i = 0; i < t.weights.size(); ++i)
    t.weights[i] = 1.0 + rng::uniform01(rng::stream(880, {static_cast<int64_t>(i)}));
  EnvironmentWindow env(EnvironmentSpec::explicit_table(t),
                        GridGeometry({0, 0}, {3, 3}, Topology::Torus));
  LatticeFunction mu0 = random_function(env.geometry(), 881, 1.0);
  const std::vector<double> p = {0.375, -0.875};
  for (double t_budget : {0.9, 1.9, 2.9, 3.7}) {
    HorizonValue fast = solve_finite_horizon(env, p, {1, 1}, t_budget, mu0);
    HorizonValue slow = oracle_finite_horizon(env, p, {1, 1}, t_budget, mu0);
    CHECK(fast.value == slow.value);
    CHECK(fast.argmin == slow.argmin);
  }
}

TEST_CASE("open-box horizon refuses a clipped reachable set") {
  EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, 1.0), centered_box(2, 3));
  LatticeFunction zero = LatticeFunction::zeros(env.geometry());
  CHECK_THROWS_AS(solve_finite_horizon(env, V{1.0, 0.0}, {0, 0}, 10.0, zero), std::domain_error);
}

TEST_CASE("horizon ladder on the constant medium returns floor(t)/t") {
  EnvironmentWindow env = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  HorizonLadderResult r = estimate_Hbar_horizon(env, V{1.0, 0.0}, {10.0, 25.5});
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].value == 1.0);
  CHECK(r.points[1].value == std::floor(25.5) / 25.5);
  CHECK(r.estimate == r.points[1].value);

  HorizonLadderResult zero = estimate_Hbar_horizon(env, V{0.0, 0.0}, {4.0, 9.0});
  for (const auto& pt : zero.points) CHECK(pt.value == 0.0);
  CHECK_THROWS_AS(estimate_Hbar_horizon(env, V{1.0, 0.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_Hbar_horizon(env, V{1.0, 0.0}, {-1.0}), std::invalid_argument);
}

TEST_CASE("d=1 two-atom horizon route approaches 2/3 over seeds") {
  double sum = 0;
  const int seeds = 8;
  for (int s = 0; s < seeds; ++s) {
    auto spec = EnvironmentSpec::iid_edges(
        1, WeightDistribution::finite_atoms({{1.0}, {2.0}}, {0.5, 0.5}), 500 + s);
    EnvironmentWindow env = sample_window(spec, {512}, Topology::Torus);
    HorizonLadderResult r = estimate_Hbar_horizon(env, V{1.0}, {200.0});
    sum += r.estimate;
  }
  CHECK(std::abs(sum / seeds - 2.0 / 3.0) <= 0.05);
}

TEST_CASE("both Hbar routes agree on a periodic medium") {
  auto spec = EnvironmentSpec::periodic({2, 2}, WeightDistribution::uniform_interval(1.0, 2.0), 6);
  EnvironmentWindow env = sample_window(spec, {2, 2}, Topology::Torus);
  const std::vector<double> p = {1.0, 0.0};
  StationaryLadderResult st = estimate_Hbar_stationary(env, p, {0.2, 0.1, 0.05, 0.025}, 1e-11);
  HorizonLadderResult hz = estimate_Hbar_horizon(env, p, {120.0});
  CHECK(std::abs(st.extrapolated - hz.estimate) <= 0.05);
}

TEST_CASE("Hbar estimates are Lipschitz in the momentum") {
  EnvironmentWindow env = sample_window(EnvironmentSpec::constant(2, 1.0), {4, 4}, Topology::Torus);
  const std::vector<double> ladder = {0.1, 0.05};
  StationaryLadderResult hp = estimate_Hbar_stationary(env, V{1.0, 0.0}, ladder, 1e-11);
  StationaryLadderResult hq = estimate_Hbar_stationary(env, V{0.8, 0.3}, ladder, 1e-11);
  // |p - q|_inf = 0.3 and a = 1; allow both extrapolation tolerances.
  CHECK(std::abs(hp.extrapolated - hq.extrapolated) <= 0.3 / env.bounds().a + 1e-2);
}

TEST_CASE("telescoping running cost depends only on the endpoints") {
  const std::vector<double> p = {0.5, -0.25};
  DirectionSet dirs(2);
  LatticePoint x = {2, -1};
  LatticePoint y = x;
  double fold = 0;
  for (int i = 0; i < 50; ++i) {
    int dir = static_cast<int>(rng::stream(7, {i}) % 4);
    fold += dot_direction(p, dir, 2);
    dirs.step_inplace(y, dir);
  }
  CHECK(fold == p[0] * (y[0] - x[0]) + p[1] * (y[1] - x[1]));
}

TEST_CASE("comparison principle: flat terminal data") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 55);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  LatticeFunction zero = LatticeFunction::zeros(env.geometry());
  const std::vector<double> p = {1.0, 0.25};
  // Small positive horizons sit inside the one-step discretization defect of
  // the upper bound (no move fits the budget, so the value cannot drop at the
  // continuum rate); sample at t = 0 and at horizons several steps deep.
  std::vector<ComparisonSample> samples = {{{0, 0}, 0.0}, {{2, 3}, 9.5}, {{5, 1}, 12.0}};
  ComparisonReport rep = check_comparison_principle(zero, p, env, samples);
  CHECK(rep.violations.empty());
  CHECK(rep.sup_H <= 1.0 / env.bounds().a + 1e-12);
  CHECK(rep.sup_H >= 0.0);
}

TEST_CASE("comparison principle: exact corrector sandwich") {
  // On an open box with dyadic momentum the linear profile phi = -p.x has
  // H identically zero, so both comparison bounds collapse to equality.
  EnvironmentWindow env = EnvironmentWindow(EnvironmentSpec::constant(2, 1.5), centered_box(2, 6));
  const std::vector<double> p = {0.5, -0.25};
  LatticeFunction phi = linear_function(env.geometry(), {-p[0], -p[1]});
  std::vector<ComparisonSample> samples = {{{0, 0}, 3.5}, {{1, 2}, 2.0}, {{-2, 1}, 1.0}};
  ComparisonReport rep = check_comparison_principle(phi, p, env, samples);
  CHECK(rep.sup_H == 0.0);
  CHECK(rep.inf_H == 0.0);
  CHECK(rep.violations.empty());
  for (const ComparisonSample& s : samples) {
    HorizonValue h = solve_finite_horizon(env, p, s.x, s.t, phi);
    CHECK(h.value == phi.at(s.x));
  }
}

TEST_CASE("comparison principle: rough terminal data stays inside the bounds") {
  auto spec = EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 91);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  LatticeFunction phi = random_function(env.geometry(), 92, 2.0);
  const std::vector<double> p = {0.75, -0.5};
  std::vector<ComparisonSample> samples;
  for (int i = 0; i < 8; ++i) {
    LatticePoint x = {static_cast<int>(rng::stream(93, {i, 0}) % 6),
                      static_cast<int>(rng::stream(93, {i, 1}) % 6)};
    double t = 4.0 + 4.0 * rng::uniform01(rng::stream(93, {i, 2}));
    samples.push_back({x, t});
  }
  ComparisonReport rep = check_comparison_principle(phi, p, env, samples);
  CHECK(rep.violations.empty());
}
