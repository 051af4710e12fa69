#include "fpct/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "fpct/distcompare.hpp"
#include "fpct/norms.hpp"
#include "fpct/stats.hpp"

namespace fpct {

PassageTimeMap oracle_first_passage_times(const EnvironmentWindow& env,
                                          const LatticePoint& source) {
  const GridGeometry& g = env.geometry();
  if (g.topology != Topology::OpenBox)
    throw std::invalid_argument("passage-time oracle needs an open box");
  PassageTimeMap map;
  map.source = source;
  map.geometry = g;
  map.env_fingerprint = env.fingerprint();
  map.times.assign(g.cells(), std::numeric_limits<double>::infinity());
  std::vector<char> on_path(g.cells(), 0);
  DirectionSet dirs(g.d);
  // Every simple path; positive weights make path sums strictly increasing,
  // so the minimum over simple paths is the minimum over all walks.
  auto dfs = [&](auto&& self, int64_t cell, double time) -> void {
    if (time < map.times[cell]) map.times[cell] = time;
    on_path[cell] = 1;
    for (int dir = 0; dir < dirs.count(); ++dir) {
      const int64_t next = g.neighbor(cell, dir);
      if (next < 0 || on_path[next]) continue;
      self(self, next, time + env.weight_by_index(cell, dir));
    }
    on_path[cell] = 0;
  };
  dfs(dfs, g.index(source), 0.0);
  return map;
}

HorizonValue oracle_finite_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                   const LatticePoint& x, double t, const LatticeFunction& mu0) {
  const GridGeometry& g = env.geometry();
  if (static_cast<int>(p.size()) != g.d) throw std::invalid_argument("momentum rank mismatch");
  DirectionSet dirs(g.d);
  // Walk endpoints live in absolute coordinates (torus media wrap reads);
  // re-expansion only on a strict time improvement keeps the recursion
  // finite while still reaching every endpoint at its minimal time.
  std::map<LatticePoint, double> best;
  auto walk = [&](auto&& self, const LatticePoint& y, double time) -> void {
    auto [it, fresh] = best.try_emplace(y, time);
    if (!fresh) {
      if (time >= it->second) return;
      it->second = time;
    }
    for (int dir = 0; dir < dirs.count(); ++dir) {
      LatticePoint ny = y;
      dirs.step_inplace(ny, dir);
      if (g.topology == Topology::OpenBox && !g.inside(ny)) continue;
      const double nt = time + env.weight(y, dir);
      if (nt > t) continue;
      self(self, ny, nt);
    }
  };
  walk(walk, x, 0.0);

  HorizonValue out;
  out.x = x;
  out.t = t;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& [y, time] : best) {
    (void)time;
    double cost = mu0.at(y);
    for (size_t a = 0; a < p.size(); ++a) cost += p[a] * (y[a] - x[a]);
    if (cost < out.value) {
      out.value = cost;
      out.argmin = y;
    }
  }
  return out;
}

namespace {

std::string strfmt(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::vector<GeneratedMedium> make_media(int count, int d, int min_atoms, int max_atoms,
                                        uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(1.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mom(-2.0, 2.0);
  std::uniform_int_distribution<int> atom_count(min_atoms, max_atoms);
  std::vector<GeneratedMedium> out;
  out.reserve(count);
  for (int m = 0; m < count; ++m) {
    const int k = atom_count(gen);
    std::vector<std::vector<double>> atoms(k, std::vector<double>(d));
    for (auto& atom : atoms)
      for (double& v : atom) v = val(gen);
    std::vector<double> w(k);
    double wsum = 0;
    for (double& v : w) {
      v = unit(gen);
      wsum += v;
    }
    const double floor_p = 0.15;
    std::vector<double> probs(k);
    double psum = 0;
    for (int i = 0; i < k; ++i) {
      probs[i] = floor_p + (1.0 - floor_p * k) * (w[i] / wsum);
      psum += probs[i];
    }
    for (double& q : probs) q /= psum;
    std::vector<double> p(d);
    for (;;) {
      double pinf = 0;
      for (double& v : p) {
        v = mom(gen);
        pinf = std::max(pinf, std::abs(v));
      }
      if (pinf >= 0.5) break;
    }
    GeneratedMedium g;
    g.medium = AtomicMedium(d, atoms, probs);
    g.spec = EnvironmentSpec::hyperplane_symmetric(
        d, WeightDistribution::finite_atoms(std::move(atoms), probs),
        seed + 1000 + static_cast<uint64_t>(m));
    g.p = std::move(p);
    out.push_back(std::move(g));
  }
  return out;
}

struct Tally {
  bool ok = true;
  std::string detail;

  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note("FAIL " + what);
    }
  }
};

// --- 1: constant media are computed without statistical or model error ----
Tally criterion_homogeneous(int threads) {
  Tally t;
  double worst_stat = 0, worst_hor = 0;
  for (double c : {1.0, 2.5}) {
    for (int d : {1, 2}) {
      const EnvironmentSpec spec = EnvironmentSpec::constant(d, c);
      std::vector<double> e1(d, 0.0);
      e1[0] = 1.0;

      EstimateOptions opts;
      opts.threads = threads;
      TimeConstantEstimate est = estimate_time_constant(spec, e1, {8, 16, 32}, 4, opts);
      t.require(est.estimate == c && est.half_width == 0.0,
                strfmt("m-hat(c=%g,d=%d) = %.17g +/- %.3g, want exactly %g", c, d, est.estimate,
                       est.half_width, c));

      AtomicMedium med(d, {std::vector<double>(d, c)}, {1.0});
      AlgorithmResult alg = run_algorithm(med, e1);
      t.require(alg.hbar == 1.0 / c && alg.status == MinimizerStatus::CorrectorAtTermination,
                strfmt("sym-minimize(c=%g,d=%d) = %.17g [%s], want exactly %g", c, d, alg.hbar,
                       status_name(alg.status).c_str(), 1.0 / c));

      std::vector<int> extent(d, 4);
      EnvironmentWindow env = sample_window(spec, extent, Topology::Torus);
      StationaryLadderResult lad =
          estimate_Hbar_stationary(env, e1, {0.2, 0.1, 0.05, 0.025}, 1e-12);
      const double stat_err = std::abs(lad.extrapolated - 1.0 / c);
      worst_stat = std::max(worst_stat, stat_err);
      t.require(stat_err <= 5e-3,
                strfmt("stationary(c=%g,d=%d) err %.3g > 5e-3", c, d, stat_err));

      HorizonLadderResult hor = estimate_Hbar_horizon(env, e1, {400.0});
      const double hor_err = std::abs(hor.estimate - 1.0 / c);
      worst_hor = std::max(worst_hor, hor_err);
      t.require(hor_err <= 2.0 / 400.0,
                strfmt("horizon(c=%g,d=%d) err %.3g > 5e-3", c, d, hor_err));
    }
  }
  if (t.ok)
    t.note(strfmt("m-hat and sym-minimize exact; stationary err <= %.2e; horizon err <= %.2e",
                  worst_stat, worst_hor));
  return t;
}

// --- 2: one-dimensional media obey the closed-form time constant ----------
Tally criterion_d1_law(int threads) {
  Tally t;
  const std::vector<double> p = {1.0};
  double worst_law = 0, worst_bf = 0, worst_z = 0;
  int idx = 0;
  for (const GeneratedMedium& g : d1_test_media()) {
    AlgorithmResult alg = run_algorithm(g.medium, p, 200000, 1e-12);
    const double mean_tau = g.medium.mean_weight(0);
    const double law_err = std::abs(alg.hbar - 1.0 / mean_tau);
    worst_law = std::max(worst_law, law_err);
    t.require(alg.status == MinimizerStatus::CorrectorAtTermination,
              strfmt("medium %d status %s", idx, status_name(alg.status).c_str()));
    t.require(law_err <= 1e-9, strfmt("medium %d hbar err %.3g > 1e-9", idx, law_err));

    const double bf = brute_force_Hbar(g.medium, p);
    const double bf_err = std::abs(bf - alg.hbar);
    worst_bf = std::max(worst_bf, bf_err);
    t.require(bf_err <= 1e-6, strfmt("medium %d brute-force err %.3g > 1e-6", idx, bf_err));

    EstimateOptions opts;
    opts.threads = threads;
    TimeConstantEstimate est =
        estimate_time_constant(g.spec, {1.0}, {2500, 5000, 10000}, 8, opts);
    std::vector<double> last;
    for (const auto& row : est.scaled) last.push_back(row.back());
    const double se = stats::sample_sd(last) / std::sqrt(static_cast<double>(last.size()));
    const double dev = std::abs(est.estimate - 1.0 / alg.hbar);
    const double z = se > 0 ? dev / se : (dev == 0 ? 0 : std::numeric_limits<double>::infinity());
    worst_z = std::max(worst_z, z);
    t.require(dev <= 3 * se,
              strfmt("medium %d m-hat dev %.3g > 3 se = %.3g", idx, dev, 3 * se));
    ++idx;
  }
  if (t.ok)
    t.note(strfmt("law err <= %.2e; brute-force err <= %.2e; worst |z| = %.2f", worst_law,
                  worst_bf, worst_z));
  return t;
}

// --- 3: tiny explicit environments match exhaustive enumeration -----------
Tally criterion_oracles(int /*threads*/) {
  Tally t;
  std::mt19937_64 gen(20260813);
  std::uniform_real_distribution<double> wdist(1.0, 2.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int fpp_cells = 0, horizon_values = 0;
  for (int rep = 0; rep < 50 && t.ok; ++rep) {
    ExplicitTable table;
    table.box = GridGeometry({0, 0}, {3, 3}, Topology::OpenBox);
    table.declared = BoundsSpec(1.0, 2.0);
    table.weights.resize(static_cast<size_t>(table.box.cells()) * 4);
    for (double& w : table.weights) w = wdist(gen);
    const EnvironmentSpec spec = EnvironmentSpec::explicit_table(table);

    EnvironmentWindow box = sample_window(spec, {3, 3}, Topology::OpenBox, {{0, 0}});
    for (int64_t s = 0; s < box.cell_count(); ++s) {
      const LatticePoint src = box.geometry().point(s);
      PassageTimeMap got = first_passage_times(box, src);
      PassageTimeMap want = oracle_first_passage_times(box, src);
      for (int64_t i = 0; i < box.cell_count(); ++i) {
        ++fpp_cells;
        t.require(got.times[i] == want.times[i],
                  strfmt("env %d src %lld cell %lld: %.17g vs oracle %.17g", rep,
                         static_cast<long long>(s), static_cast<long long>(i), got.times[i],
                         want.times[i]));
      }
    }

    EnvironmentWindow torus = sample_window(spec, {3, 3}, Topology::Torus, {{0, 0}});
    std::vector<double> p = {unit(gen), unit(gen)};
    LatticeFunction mu0 = LatticeFunction::zeros(torus.geometry());
    for (double& v : mu0.values) v = unit(gen);
    const LatticePoint x = {rep % 3, (rep / 3) % 3};
    for (double hor : {0.9, 1.9, 2.9, 3.7}) {
      HorizonValue got = solve_finite_horizon(torus, p, x, hor, mu0);
      HorizonValue want = oracle_finite_horizon(torus, p, x, hor, mu0);
      ++horizon_values;
      t.require(got.value == want.value && got.argmin == want.argmin,
                strfmt("env %d t=%g: %.17g@? vs oracle %.17g", rep, hor, got.value, want.value));
    }
  }
  if (t.ok)
    t.note(strfmt("%d passage times and %d horizon values bitwise equal", fpp_cells,
                  horizon_values));
  return t;
}

// --- 4: stationary residual scales linearly in epsilon --------------------
Tally criterion_residual_scaling(int /*threads*/) {
  Tally t;
  struct Case {
    const char* label;
    EnvironmentSpec spec;
    std::vector<int> extent;
  };
  const std::vector<Case> cases = {
      {"period-4", EnvironmentSpec::periodic({4, 4}, WeightDistribution::uniform_interval(1, 2), 404),
       {4, 4}},
      {"iid-32", EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1, 2), 3232),
       {32, 32}},
  };
  const std::vector<double> p = {1.0, 0.0};
  double worst_ratio = 0, worst_lip = 0;
  for (const Case& c : cases) {
    EnvironmentWindow env = sample_window(c.spec, c.extent, Topology::Torus);
    const BoundsSpec bb = env.bounds();
    const double lip_bound = (bb.a + bb.b) / bb.a * sup_norm(p);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      CellField field = solve_stationary(env, p, eps, 1e-11);
      const double slope = check_hjb_residual(field, env) / eps;
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
      const double lip = field.nu.lipschitz_norm();
      worst_lip = std::max(worst_lip, lip / lip_bound);
      t.require(lip <= lip_bound + 1e-9,
                strfmt("%s eps=%g Lip %.6g > %.6g", c.label, eps, lip, lip_bound));
    }
    const double ratio = hi / lo;
    worst_ratio = std::max(worst_ratio, ratio);
    t.require(ratio < 4.0, strfmt("%s residual/eps ratio %.3f >= 4", c.label, ratio));
  }
  if (t.ok)
    t.note(strfmt("residual/eps max:min <= %.3f; Lip within %.4f of bound", worst_ratio,
                  worst_lip));
  return t;
}

// --- 5: every iteration descends by the certified amount ------------------
Tally criterion_descent(int /*threads*/) {
  Tally t;
  int steps = 0, idx = 0;
  double worst_xi = 0, worst_margin = -std::numeric_limits<double>::infinity();
  for (const GeneratedMedium& g : d2_test_media()) {
    AlgorithmResult alg = run_algorithm(g.medium, g.p, 200000, 1e-10);
    const BoundsSpec bb = g.medium.bounds();
    const size_t n_steps =
        alg.trace.size() - (alg.status != MinimizerStatus::IterationCap ? 1 : 0);
    for (size_t i = 0; i < n_steps; ++i) {
      const StepDiagnostics& d = alg.trace[i];
      const double slack = 1e-9 * std::max(1.0, std::abs(d.sup_before));
      const double margin = d.sup_after - (d.sup_before - d.gap * bb.a / bb.b);
      worst_margin = std::max(worst_margin, margin);
      worst_xi = std::max(worst_xi, std::abs(d.xi));
      t.require(margin <= slack,
                strfmt("medium %d step %zu: sup drop short by %.3g", idx, i, margin));
      t.require(std::abs(d.xi) <= 1.0 + 1e-12,
                strfmt("medium %d step %zu: |xi| = %.17g > 1", idx, i, std::abs(d.xi)));
      ++steps;
    }
    auto [lo, hi] = infsup_bounds(alg.profile, g.medium);
    const double bf = brute_force_Hbar(g.medium, g.p);
    t.require(lo - 5e-6 <= bf && bf <= hi + 5e-6,
              strfmt("medium %d bracket [%.9g, %.9g] misses brute force %.9g", idx, lo, hi, bf));
    ++idx;
  }
  if (t.ok)
    t.note(strfmt("%d steps; worst descent margin %.2e; max |xi| = %.12f", steps, worst_margin,
                  worst_xi));
  return t;
}

NormEvaluator algorithm_norm(const AtomicMedium& medium) {
  return [medium](std::span<const double> p) {
    return run_algorithm(medium, p, 200000, 1e-12).hbar;
  };
}

// --- 6: the effective Hamiltonian behaves like a norm ---------------------
Tally criterion_norm_axioms(int /*threads*/) {
  Tally t;
  double worst_h = 0, worst_tri = 0, worst_low = 0;
  int idx = 0;
  auto run = [&](const GeneratedMedium& g) {
    NormAxiomOptions opts;
    opts.seed = 60 + static_cast<uint64_t>(idx);
    NormAxiomReport rep =
        check_norm_axioms(algorithm_norm(g.medium), g.medium.d, g.medium.bounds(), opts);
    worst_h = std::max(worst_h, rep.worst_homogeneity);
    worst_tri = std::max(worst_tri, rep.worst_triangle);
    worst_low = std::max(worst_low, rep.worst_lower_gap);
    t.require(rep.ok, strfmt("medium %d: homogeneity %.3g, triangle %.3g, lower %.3g", idx,
                             rep.worst_homogeneity, rep.worst_triangle, rep.worst_lower_gap));
    ++idx;
  };
  for (const GeneratedMedium& g : d1_test_media()) run(g);
  for (const GeneratedMedium& g : d2_test_media()) run(g);
  if (t.ok)
    t.note(strfmt("25 media; worst homogeneity %.2e, triangle %.2e, lower-bound gap %.2e",
                  worst_h, worst_tri, worst_low));
  return t;
}

// --- 7: finite-horizon values sit between the two comparison barriers -----
Tally criterion_comparison(int /*threads*/) {
  Tally t;
  const EnvironmentSpec spec =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1, 2), 777);
  EnvironmentWindow env = sample_window(spec, {6, 6}, Topology::Torus);
  std::mt19937_64 gen(20260807);
  std::uniform_real_distribution<double> phi_val(-2.0, 2.0);
  std::uniform_real_distribution<double> mom(-1.0, 1.0);
  std::uniform_int_distribution<int> cell(0, 5);
  std::uniform_real_distribution<double> horizon(4.0, 8.0);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    LatticeFunction phi = LatticeFunction::zeros(env.geometry());
    for (double& v : phi.values) v = phi_val(gen);
    std::vector<double> p = {mom(gen), mom(gen)};
    std::vector<ComparisonSample> samples;
    for (int s = 0; s < 20; ++s) samples.push_back({{cell(gen), cell(gen)}, horizon(gen)});
    ComparisonReport rep7 = check_comparison_principle(phi, p, env, samples);
    checked += static_cast<int>(samples.size());
    for (const ComparisonViolation& v : rep7.violations)
      t.require(false, strfmt("phi %d at (%d,%d) t=%.3f: mu=%.6g outside [%.6g, %.6g]", rep,
                              v.x[0], v.x[1], v.t, v.mu, v.lower, v.upper));
  }
  if (t.ok) t.note(strfmt("%d samples; zero violations of either barrier", checked));
  return t;
}

// --- 8: marginal-distance bounds and the coupled simulation agree ---------
Tally criterion_distribution(int threads) {
  Tally t;
  const MarginalSpec m1 = MarginalSpec::uniform_interval(1.0, 2.0);
  const MarginalSpec m2 = MarginalSpec::uniform_interval(1.1, 2.1);

  const double ks = kolmogorov_distance(m1, m2);
  t.require(std::abs(ks - 0.1) <= 1e-12, strfmt("d_Kol = %.17g, want 0.1", ks));

  CouplingGapBound cg = coupling_gap_bound(m1, m2);
  t.require(std::abs(cg.mesh_sup_gap - 0.1) <= 1e-12 && cg.ok,
            strfmt("coupling sup-gap = %.17g (certified %.17g), want 0.1", cg.mesh_sup_gap,
                   cg.sup_gap_bound));

  const EnvironmentSpec spec1 =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.0, 2.0), 808);
  const EnvironmentSpec spec2 =
      EnvironmentSpec::iid_edges(2, WeightDistribution::uniform_interval(1.1, 2.1), 808);
  EmpiricalGapReport rep = empirical_gap_check(spec1, spec2, {1.0, 0.0}, 200, 8, threads);
  t.require(rep.measured_gap >= 0.1 - rep.ci && rep.measured_gap <= 0.2 + rep.ci,
            strfmt("coupled gap %.6g outside [0.1 - %.3g, 0.2 + %.3g]", rep.measured_gap, rep.ci,
                   rep.ci));

  GapBound primal = gap_bound_primal(BoundsSpec(1.0, 2.0), BoundsSpec(1.1, 2.1), ks);
  GapBound dual = gap_bound_dual(BoundsSpec(1.0, 2.0), BoundsSpec(1.1, 2.1), ks);
  const double dual_expected = std::max(2.0 / 1.0, 2.1 / 1.1) * (2.0 * 2.1) / (1.0 * 1.1) * 0.1;
  t.require(std::abs(dual.value - dual_expected) <= 1e-12,
            strfmt("dual bound %.17g, want %.17g", dual.value, dual_expected));
  t.require(dual.value > primal.value,
            strfmt("dual %.6g not weaker than primal %.6g", dual.value, primal.value));
  if (t.ok)
    t.note(strfmt("d_Kol = %.3f; sup-gap = %.3f; coupled gap %.4f in [%.4f, %.4f]; dual %.4f > "
                  "primal %.4f",
                  ks, cg.mesh_sup_gap, rep.measured_gap, 0.1 - rep.ci, 0.2 + rep.ci, dual.value,
                  primal.value));
  return t;
}

// --- 9: dual norm of the minimized Hamiltonian reproduces simulation ------
Tally criterion_duality(int threads) {
  Tally t;
  const AtomicMedium med(2, {{1.0, 2.0}, {2.0, 1.0}}, {0.5, 0.5});
  NormTable table =
      build_norm_table_2d(algorithm_norm(med), 3.14159265358979323846 / 256.0, 1e-9, "sym-minimize");
  const EnvironmentSpec spec = EnvironmentSpec::hyperplane_symmetric(
      2, WeightDistribution::finite_atoms({{1.0, 2.0}, {2.0, 1.0}}, {0.5, 0.5}), 909);

  double worst_rel = 0;
  const std::vector<std::vector<double>> directions = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (const std::vector<double>& x : directions) {
    EstimateOptions opts;
    opts.threads = threads;
    TimeConstantEstimate est = estimate_time_constant(spec, x, {12, 24, 48}, 24, opts);
    DualNormValue dv = dual_norm(table, x, med.bounds());
    const double dev = std::abs(est.estimate - dv.value);
    const double tol =
        std::max(0.05 * std::max(est.estimate, dv.value), est.half_width + dv.slack);
    worst_rel = std::max(worst_rel, dev / std::max(est.estimate, dv.value));
    t.require(dev <= tol,
              strfmt("x=(%g,%g): m-hat %.6g vs dual norm %.6g, dev %.3g > tol %.3g", x[0], x[1],
                     est.estimate, dv.value, dev, tol));
  }
  if (t.ok) t.note(strfmt("4 directions; worst relative deviation %.4f", worst_rel));
  return t;
}

}  // namespace

std::vector<GeneratedMedium> d1_test_media() { return make_media(5, 1, 2, 5, 20260814); }
std::vector<GeneratedMedium> d2_test_media() { return make_media(20, 2, 2, 6, 20260815); }

CriterionResult run_criterion(int id, int threads) {
  struct Entry {
    const char* name;
    Tally (*fn)(int);
    double budget_seconds;  // 0 = no stated budget
  };
  static const Entry entries[9] = {
      {"homogeneous-exactness", criterion_homogeneous, 30},
      {"d1-corrector-law", criterion_d1_law, 120},
      {"oracle-equivalence", criterion_oracles, 60},
      {"hjb-residual-scaling", criterion_residual_scaling, 0},
      {"descent-certificate", criterion_descent, 0},
      {"norm-axioms", criterion_norm_axioms, 0},
      {"comparison-principle", criterion_comparison, 0},
      {"distribution-comparison", criterion_distribution, 0},
      {"duality-roundtrip", criterion_duality, 0},
  };
  if (id < 1 || id > 9) throw std::invalid_argument("criterion id must be in 1..9");
  const Entry& e = entries[id - 1];
  const auto start = std::chrono::steady_clock::now();
  Tally t = e.fn(threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (e.budget_seconds > 0 && seconds >= e.budget_seconds) {
    t.ok = false;
    t.note(strfmt("FAIL runtime %.1fs over the %gs budget", seconds, e.budget_seconds));
  }
  CriterionResult out;
  out.id = id;
  out.name = e.name;
  out.passed = t.ok;
  out.detail = t.detail;
  out.seconds = seconds;
  return out;
}

std::vector<CriterionResult> run_acceptance_suite(
    int threads, const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 9; ++id) {
    out.push_back(run_criterion(id, threads));
    if (on_done) on_done(out.back());
  }
  return out;
}

}  // namespace fpct
