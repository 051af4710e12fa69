#include "fpct/cellproblem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpct {

LatticeFunction::LatticeFunction(GridGeometry g, std::vector<double> v)
    : geometry(std::move(g)), values(std::move(v)) {
  if (values.size() != static_cast<size_t>(geometry.cells()))
    throw std::invalid_argument("lattice function size mismatch");
}

LatticeFunction LatticeFunction::zeros(const GridGeometry& g) {
  return LatticeFunction(g, std::vector<double>(g.cells(), 0.0));
}

double LatticeFunction::lipschitz_norm() const {
  double m = 0;
  const int nd = 2 * geometry.d;
  for (int64_t i = 0; i < geometry.cells(); ++i) {
    for (int dir = 0; dir < nd; ++dir) {
      int64_t nb = geometry.neighbor(i, dir);
      if (nb < 0) continue;
      m = std::max(m, std::abs(values[nb] - values[i]));
    }
  }
  return m;
}

double discrete_hamiltonian(const LatticeFunction& phi, std::span<const double> p,
                            const LatticePoint& x, const EnvironmentWindow& env) {
  const GridGeometry& g = env.geometry();
  if (static_cast<int>(p.size()) != g.d) throw std::invalid_argument("momentum rank mismatch");
  const DirectionSet dirs(g.d);
  int64_t idx = g.index(x);
  double best = -std::numeric_limits<double>::infinity();
  for (int dir = 0; dir < dirs.count(); ++dir) {
    int64_t nb = g.neighbor(idx, dir);
    if (nb < 0) throw std::out_of_range("discrete Hamiltonian needs all neighbors in the window");
    double dphi = phi.values[nb] - phi.values[idx];
    double v = (-dphi - dot_direction(p, dir, g.d)) / env.weight_by_index(idx, dir);
    best = std::max(best, v);
  }
  return best;
}

CellField solve_stationary(const EnvironmentWindow& env, std::span<const double> p, double epsilon,
                           double tol) {
  if (env.topology() != Topology::Torus)
    throw std::invalid_argument("stationary cell problem needs a torus window");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const GridGeometry& g = env.geometry();
  if (static_cast<int>(p.size()) != g.d) throw std::invalid_argument("momentum rank mismatch");

  const int nd = 2 * g.d;
  const int64_t n = g.cells();
  const double q = std::exp(-epsilon * env.bounds().a);

  // Per-edge discount factors; the one-step update is then a pure min-plus
  // relaxation.
  std::vector<double> discount(static_cast<size_t>(n) * nd);
  std::vector<double> pa(nd);
  for (int dir = 0; dir < nd; ++dir) pa[dir] = dot_direction(p, dir, g.d);
  for (int64_t i = 0; i < n; ++i)
    for (int dir = 0; dir < nd; ++dir)
      discount[i * nd + dir] = std::exp(-epsilon * env.weight_by_index(i, dir));

  CellField out;
  out.p.assign(p.begin(), p.end());
  out.epsilon = epsilon;
  out.nu = LatticeFunction::zeros(g);
  std::vector<double>& nu = out.nu.values;

  const auto relax = [&](int64_t i, const std::vector<double>& src) {
    double best = std::numeric_limits<double>::infinity();
    for (int dir = 0; dir < nd; ++dir) {
      int64_t nb = g.neighbor(i, dir);
      double v = pa[dir] + discount[i * nd + dir] * src[nb];
      best = std::min(best, v);
    }
    return best;
  };

  const int max_sweeps = 2000000;
  double check_below = tol * (1.0 - q) * 0.5;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double diff = 0;
    for (int64_t i = 0; i < n; ++i) {
      double v = relax(i, nu);
      diff = std::max(diff, std::abs(v - nu[i]));
      nu[i] = v;
    }
    out.sweep_diffs.push_back(diff);
    out.sweeps = sweep + 1;
    if (diff <= check_below || diff == 0.0) {
      // certify with one non-updating application
      double resid = 0;
      for (int64_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(relax(i, nu) - nu[i]));
      if (resid <= tol) {
        out.residual = resid;
        return out;
      }
    }
  }
  throw std::runtime_error("stationary solver did not converge");
}

double check_hjb_residual(const CellField& field, const EnvironmentWindow& env) {
  const GridGeometry& g = env.geometry();
  if (!g.same_shape(field.nu.geometry))
    throw std::invalid_argument("field and window geometries differ");
  double worst = 0;
  for (int64_t i = 0; i < g.cells(); ++i) {
    double h = discrete_hamiltonian(field.nu, field.p, g.point(i), env);
    worst = std::max(worst, std::abs(field.epsilon * field.nu.values[i] + h));
  }
  return worst;
}

StationaryLadderResult estimate_Hbar_stationary(const EnvironmentWindow& env, std::span<const double> p,
                                                std::vector<double> eps_ladder, double tol) {
  if (eps_ladder.empty()) throw std::invalid_argument("epsilon ladder is empty");
  StationaryLadderResult out;
  LatticePoint origin(env.dim(), 0);
  for (double eps : eps_ladder) {
    CellField f = solve_stationary(env, p, eps, tol);
    StationaryLadderPoint pt;
    pt.epsilon = eps;
    pt.value = -eps * f.nu.at(origin);
    pt.residual = f.residual;
    pt.hjb_residual = check_hjb_residual(f, env);
    pt.sweeps = f.sweeps;
    out.points.push_back(pt);
  }
  // v(eps) ~ Hbar + C eps: eliminate C with the two smallest epsilons.
  std::vector<StationaryLadderPoint> sorted = out.points;
  std::sort(sorted.begin(), sorted.end(),
            [](const StationaryLadderPoint& a, const StationaryLadderPoint& b) {
              return a.epsilon < b.epsilon;
            });
  if (sorted.size() == 1) {
    out.extrapolated = sorted[0].value;
  } else {
    double e2 = sorted[0].epsilon, v2 = sorted[0].value;
    double e1 = sorted[1].epsilon, v1 = sorted[1].value;
    out.extrapolated = (e1 * v2 - e2 * v1) / (e1 - e2);
  }
  return out;
}

HorizonValue solve_finite_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                  const LatticePoint& x, double t, const LatticeFunction& mu0) {
  const GridGeometry& g = env.geometry();
  if (static_cast<int>(p.size()) != g.d) throw std::invalid_argument("momentum rank mismatch");
  if (!g.same_shape(mu0.geometry))
    throw std::invalid_argument("terminal data and window geometries differ");
  ReachReport reach = reachable_with_times(env, x, t);
  if (reach.touches_boundary)
    throw std::domain_error("window too small: reachable set touches the boundary");

  HorizonValue out;
  out.x = x;
  out.t = t;
  out.value = std::numeric_limits<double>::infinity();
  for (const ReachableCell& c : reach.cells) {
    double cost = mu0.at(c.y);
    for (size_t a = 0; a < p.size(); ++a) cost += p[a] * (c.y[a] - x[a]);
    if (cost < out.value) {
      out.value = cost;
      out.argmin = c.y;
    }
  }
  return out;
}

HorizonLadderResult estimate_Hbar_horizon(const EnvironmentWindow& env, std::span<const double> p,
                                          std::vector<double> t_ladder) {
  if (t_ladder.empty()) throw std::invalid_argument("horizon ladder is empty");
  for (double t : t_ladder)
    if (!(t > 0)) throw std::invalid_argument("horizons must be positive");
  HorizonLadderResult out;
  LatticeFunction zero = LatticeFunction::zeros(env.geometry());
  LatticePoint origin(env.dim(), 0);
  double t_max = 0;
  for (double t : t_ladder) {
    HorizonValue h = solve_finite_horizon(env, p, origin, t, zero);
    out.points.push_back({t, -h.value / t});
    if (t >= t_max) {
      t_max = t;
      out.estimate = out.points.back().value;
    }
  }
  return out;
}

ComparisonReport check_comparison_principle(const LatticeFunction& phi, std::span<const double> p,
                                            const EnvironmentWindow& env,
                                            const std::vector<ComparisonSample>& samples,
                                            double slack) {
  const GridGeometry& g = env.geometry();
  if (!g.same_shape(phi.geometry)) throw std::invalid_argument("phi and window geometries differ");
  ComparisonReport rep;
  rep.sup_H = -std::numeric_limits<double>::infinity();
  rep.inf_H = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int64_t i = 0; i < g.cells(); ++i) {
    if (g.topology == Topology::OpenBox) {
      bool interior = true;
      for (int dir = 0; dir < 2 * g.d && interior; ++dir)
        if (g.neighbor(i, dir) < 0) interior = false;
      if (!interior) continue;
    }
    double h = discrete_hamiltonian(phi, p, g.point(i), env);
    rep.sup_H = std::max(rep.sup_H, h);
    rep.inf_H = std::min(rep.inf_H, h);
    any = true;
  }
  if (!any) throw std::invalid_argument("window has no interior cells");

  for (const ComparisonSample& s : samples) {
    HorizonValue mu = solve_finite_horizon(env, p, s.x, s.t, phi);
    double phix = phi.at(s.x);
    double lower = phix - s.t * rep.sup_H;
    double upper = phix - s.t * rep.inf_H;
    double tol = slack * std::max({1.0, std::abs(lower), std::abs(upper)});
    ComparisonViolation v;
    v.x = s.x;
    v.t = s.t;
    v.mu = mu.value;
    v.lower = lower;
    v.upper = upper;
    v.below_lower = mu.value < lower - tol;
    v.above_upper = mu.value > upper + tol;
    if (v.below_lower || v.above_upper) rep.violations.push_back(v);
  }
  return rep;
}

}  // namespace fpct
