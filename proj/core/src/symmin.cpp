#include "fpct/symmin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace fpct {

namespace {
constexpr double kTieRel = 1e-9;

double tie_tol(double scale) { return kTieRel * std::max(1.0, std::abs(scale)); }
}  // namespace

AtomicMedium::AtomicMedium(int d_, std::vector<std::vector<double>> atoms_, std::vector<double> probs_)
    : d(d_), atoms(std::move(atoms_)), probs(std::move(probs_)) {
  if (d < 1) throw std::invalid_argument("medium dimension must be >= 1");
  if (atoms.empty() || atoms.size() != probs.size())
    throw std::invalid_argument("medium needs matching atoms and probabilities");
  double sum = 0;
  for (double q : probs) {
    if (q < 0) throw std::invalid_argument("atom probabilities must be nonnegative");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("atom probabilities must sum to 1");
  bool has_support = false;
  for (size_t k = 0; k < atoms.size(); ++k) {
    if (static_cast<int>(atoms[k].size()) != d)
      throw std::invalid_argument("atom weight-vectors must have d components");
    for (double w : atoms[k])
      if (!(w > 0)) throw std::invalid_argument("atom weights must be positive");
    if (probs[k] > 0) has_support = true;
  }
  if (!has_support) throw std::invalid_argument("medium has empty support");
}

std::vector<int> AtomicMedium::support() const {
  std::vector<int> idx;
  for (size_t k = 0; k < probs.size(); ++k)
    if (probs[k] > 0) idx.push_back(static_cast<int>(k));
  return idx;
}

BoundsSpec AtomicMedium::bounds() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (size_t k = 0; k < atoms.size(); ++k) {
    if (probs[k] <= 0) continue;
    for (double w : atoms[k]) {
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  return BoundsSpec(lo, hi);
}

double AtomicMedium::mean_weight(int axis) const {
  double m = 0;
  for (size_t k = 0; k < atoms.size(); ++k) m += probs[k] * atoms[k][axis];
  return m;
}

double h_sym(double t, std::span<const double> p, std::span<const double> atom) {
  double best = 0;
  for (size_t i = 0; i < atom.size(); ++i) best = std::max(best, std::abs(t + p[i]) / atom[i]);
  return best;
}

TentMin h_sym_minimum(std::span<const double> atom, std::span<const double> p) {
  const size_t d = atom.size();
  std::vector<double> cand;
  for (size_t i = 0; i < d; ++i) cand.push_back(-p[i]);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i + 1; j < d; ++j) {
      // opposite-slope crossing always exists; equal-slope tents cross only
      // when the weights differ
      cand.push_back(-(p[i] * atom[j] + p[j] * atom[i]) / (atom[i] + atom[j]));
      if (atom[i] != atom[j])
        cand.push_back((p[j] * atom[i] - p[i] * atom[j]) / (atom[j] - atom[i]));
    }
  }
  TentMin best{cand[0], h_sym(cand[0], p, atom)};
  for (double t : cand) {
    double v = h_sym(t, p, atom);
    if (v < best.value || (v == best.value && t < best.t_star)) best = {t, v};
  }
  return best;
}

namespace {

// One-sided slopes of t -> h_sym at t: the right slope is the max right
// derivative over active tents, the left slope the min left derivative.
void one_sided_slopes(double t, std::span<const double> p, std::span<const double> atom,
                      double value, double tol, double* d_minus, double* d_plus) {
  double dp = -std::numeric_limits<double>::infinity();
  double dm = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < atom.size(); ++i) {
    double g = std::abs(t + p[i]) / atom[i];
    if (g < value - tol) continue;  // inactive tent
    double s = t + p[i];
    dp = std::max(dp, (s >= 0 ? 1.0 : -1.0) / atom[i]);
    dm = std::min(dm, (s > 0 ? 1.0 : -1.0) / atom[i]);
  }
  *d_minus = dm;
  *d_plus = dp;
}

}  // namespace

StepDiagnostics classify_sets(const Profile& profile, const AtomicMedium& medium) {
  if (static_cast<int>(profile.p.size()) != medium.d) throw std::invalid_argument("momentum rank mismatch");
  if (profile.f.size() != medium.atoms.size())
    throw std::invalid_argument("profile and medium atom counts differ");
  StepDiagnostics diag;
  diag.values.assign(medium.atoms.size(), 0.0);

  double mu0 = 0, sup = -std::numeric_limits<double>::infinity();
  for (int k : medium.support()) {
    double v = h_sym(profile.f[k], profile.p, medium.atoms[k]);
    diag.values[k] = v;
    mu0 += medium.probs[k] * v;
    sup = std::max(sup, v);
  }
  diag.mu0 = mu0;
  diag.sup_before = sup;
  diag.gap = sup - mu0;

  const double tol = tie_tol(sup);
  for (int k : medium.support()) {
    double v = diag.values[k];
    TentMin m = h_sym_minimum(medium.atoms[k], profile.p);
    bool at_min = v <= m.value + tol;
    if (at_min) diag.min0.push_back(k);
    if (v > mu0) diag.S.push_back(k);
    else if (v < mu0) diag.I.push_back(k);
    if (v > mu0 && !at_min) {
      double dm, dp;
      one_sided_slopes(profile.f[k], profile.p, medium.atoms[k], v, tol, &dm, &dp);
      if (dp < 0) diag.S_plus.push_back(k);
      else if (dm > 0) diag.S_minus.push_back(k);
      // a straddling subdifferential means the atom sits at its minimum and
      // belongs to min0 via the tie tolerance
    }
  }
  return diag;
}

std::pair<Profile, StepDiagnostics> iterate_step(const Profile& profile, const AtomicMedium& medium) {
  StepDiagnostics diag = classify_sets(profile, medium);
  if (!(diag.gap > 0)) throw std::logic_error("iterate_step requires a positive gap");

  const double a = medium.bounds().a;
  std::vector<double> delta(profile.f.size(), 0.0);

  double num = 0;
  auto move_toward_min = [&](int k) {
    TentMin m = h_sym_minimum(medium.atoms[k], profile.p);
    double want = m.t_star - profile.f[k];
    double cap = a * (diag.values[k] - diag.mu0);
    double step = std::clamp(want, -cap, cap);
    delta[k] = step;
    num += medium.probs[k] * step;
  };
  for (int k : diag.S_plus) move_toward_min(k);
  for (int k : diag.S_minus) move_toward_min(k);

  double den = 0;
  for (int k : diag.I) den += medium.probs[k] * a * (diag.mu0 - diag.values[k]);
  if (!(den > 0)) throw std::logic_error("descent step is degenerate: no atoms below the mean");

  // In exact arithmetic |num| <= den: the clamp caps each S move at
  // a*(value - mean), and the mean identity makes the S and I caps equal.
  // The computed differences cancel almost-equal doubles, so allow rounding
  // noise before declaring a logic error, then snap xi back into [-1, 1].
  const double noise = 1024.0 * std::numeric_limits<double>::epsilon() * a *
                       std::max(1.0, diag.sup_before);
  if (!(std::abs(num) <= den + noise))
    throw std::logic_error("balance coefficient left [-1, 1]");
  double xi = std::clamp(-num / den, -1.0, 1.0);
  diag.xi = xi;
  for (int k : diag.I) delta[k] = a * xi * (diag.mu0 - diag.values[k]);

  Profile next = profile;
  for (size_t k = 0; k < delta.size(); ++k) next.f[k] += delta[k];
  // remove float drift from the mean so feasibility never decays
  double drift = 0;
  for (int k : medium.support()) drift += medium.probs[k] * next.f[k];
  if (drift != 0.0)
    for (int k : medium.support()) next.f[k] -= drift;

  double sup_after = -std::numeric_limits<double>::infinity();
  for (int k : medium.support())
    sup_after = std::max(sup_after, h_sym(next.f[k], next.p, medium.atoms[k]));
  diag.sup_after = sup_after;
  return {std::move(next), std::move(diag)};
}

std::string status_name(MinimizerStatus s) {
  switch (s) {
    case MinimizerStatus::CorrectorAtTermination: return "corrector-at-termination";
    case MinimizerStatus::MinimizerNotCorrector: return "minimizer-not-corrector";
    case MinimizerStatus::ConvergedLimit: return "converged-limit";
    case MinimizerStatus::IterationCap: return "iteration-cap";
  }
  return "?";
}

AlgorithmResult run_algorithm(const AtomicMedium& medium, std::span<const double> p, int max_iter,
                              double tol) {
  if (max_iter < 1) throw std::invalid_argument("iteration cap must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  AlgorithmResult out;
  out.profile.p.assign(p.begin(), p.end());
  out.profile.f.assign(medium.atoms.size(), 0.0);
  out.status = MinimizerStatus::IterationCap;

  for (int iter = 0; iter < max_iter; ++iter) {
    StepDiagnostics diag = classify_sets(out.profile, medium);
    if (diag.gap <= tol) {
      // gap closed: the limit is a corrector whenever the per-atom values
      // have flattened, which the gap forces on a finite support
      bool flat = check_corrector(out.profile, medium, tie_tol(diag.sup_before));
      if (flat && diag.min0.empty()) {
        // A flat profile is stationary for the gap but need not minimize the
        // sup: the max over atoms is convex in the profile, so flatness is
        // minimal exactly when some atom is pinned at its tent minimum or all
        // atoms sit on one side of their minima.  Otherwise shift both sides
        // toward the minima in probability-balanced amounts; every value
        // drops strictly and the mean stays at zero, so the descent resumes.
        double mass_up = 0, mass_down = 0;
        std::vector<double> want(out.profile.f.size(), 0.0);
        for (int k : medium.support()) {
          TentMin m = h_sym_minimum(medium.atoms[k], out.profile.p);
          want[k] = m.t_star - out.profile.f[k];
          if (want[k] > 0) mass_up += medium.probs[k] * want[k];
          else mass_down -= medium.probs[k] * want[k];
        }
        if (mass_up > 0 && mass_down > 0) {
          const double flow = std::min(mass_up, mass_down);
          for (int k : medium.support())
            out.profile.f[k] += want[k] * (want[k] > 0 ? flow / mass_up : flow / mass_down);
          double drift = 0;
          for (int k : medium.support()) drift += medium.probs[k] * out.profile.f[k];
          if (drift != 0.0)
            for (int k : medium.support()) out.profile.f[k] -= drift;
          diag.xi = 0.0;
          double sup_after = -std::numeric_limits<double>::infinity();
          for (int k : medium.support())
            sup_after = std::max(sup_after, h_sym(out.profile.f[k], out.profile.p, medium.atoms[k]));
          diag.sup_after = sup_after;
          out.trace.push_back(std::move(diag));
          continue;
        }
      }
      out.status = flat ? MinimizerStatus::CorrectorAtTermination : MinimizerStatus::ConvergedLimit;
      out.trace.push_back(std::move(diag));
      break;
    }
    double min0_sup = -std::numeric_limits<double>::infinity();
    for (int k : diag.min0) min0_sup = std::max(min0_sup, diag.values[k]);
    if (!diag.min0.empty() && min0_sup >= diag.sup_before - tie_tol(diag.sup_before)) {
      // atoms pinned at their minimum already reach the essential sup: no
      // profile can do better, but the values are not flat
      out.status = MinimizerStatus::MinimizerNotCorrector;
      out.trace.push_back(std::move(diag));
      break;
    }
    auto [next, full] = iterate_step(out.profile, medium);
    out.profile = std::move(next);
    out.trace.push_back(std::move(full));
  }

  double sup = -std::numeric_limits<double>::infinity();
  for (int k : medium.support())
    sup = std::max(sup, h_sym(out.profile.f[k], out.profile.p, medium.atoms[k]));
  out.hbar = sup;
  return out;
}

namespace {

struct HyperplaneBasis {
  std::vector<int> sup;
  std::vector<double> rho;   // probabilities over the support
  double rho_sq = 0;

  // orthogonal projection onto {v : rho . v = 0}
  void project(std::vector<double>& v) const {
    double s = 0;
    for (size_t i = 0; i < v.size(); ++i) s += rho[i] * v[i];
    s /= rho_sq;
    for (size_t i = 0; i < v.size(); ++i) v[i] -= s * rho[i];
  }
};

double golden_section(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = fn(c), fd = fn(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = fn(d);
    }
  }
  double mid = (lo + hi) / 2;
  return mid;
}

}  // namespace

double brute_force_Hbar(const AtomicMedium& medium, std::span<const double> p, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  HyperplaneBasis basis;
  basis.sup = medium.support();
  const size_t n = basis.sup.size();
  basis.rho.resize(n);
  for (size_t i = 0; i < n; ++i) {
    basis.rho[i] = medium.probs[basis.sup[i]];
    basis.rho_sq += basis.rho[i] * basis.rho[i];
  }

  const auto value = [&](const std::vector<double>& f) {
    double v = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) v = std::max(v, h_sym(f[i], p, medium.atoms[basis.sup[i]]));
    return v;
  };

  const BoundsSpec bb = medium.bounds();
  const double range = 2.0 * bb.ratio() * sup_norm(p) + 1.0;
  std::vector<double> f(n, 0.0), best_f = f;
  double best = value(f);

  // phase 1: projected subgradient with diminishing steps
  std::vector<double> grad(n);
  std::vector<double> last_dir(n, 0.0);
  for (int it = 0; it < resolution; ++it) {
    size_t arg = 0;
    double v = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      double hv = h_sym(f[i], p, medium.atoms[basis.sup[i]]);
      if (hv > v) {
        v = hv;
        arg = i;
      }
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto& atom = medium.atoms[basis.sup[arg]];
    size_t ia = 0;
    double ga = -1;
    for (size_t i = 0; i < atom.size(); ++i) {
      double gv = std::abs(f[arg] + p[i]) / atom[i];
      if (gv > ga) {
        ga = gv;
        ia = i;
      }
    }
    grad[arg] = (f[arg] + p[ia] >= 0 ? 1.0 : -1.0) / atom[ia];
    basis.project(grad);
    double norm = 0;
    for (double gv : grad) norm += gv * gv;
    norm = std::sqrt(norm);
    if (norm == 0) break;
    double eta = range / std::sqrt(static_cast<double>(it + 1));
    for (size_t i = 0; i < n; ++i) f[i] -= eta * grad[i] / norm;
    basis.project(f);
    double cur = value(f);
    if (cur < best) {
      best = cur;
      best_f = f;
      last_dir = grad;
    }
  }

  // phase 2: golden-section polish along hyperplane directions until a
  // perturbation star of radius 1e-7 certifies the point
  std::vector<std::vector<double>> axes;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    basis.project(e);
    double norm = 0;
    for (double v : e) norm += v * v;
    if (norm > 1e-24) {
      for (double& v : e) v /= std::sqrt(norm);
      axes.push_back(std::move(e));
    }
  }
  if (axes.empty()) return best;  // single support atom: f = 0 is forced

  std::mt19937_64 gen(12345);
  std::normal_distribution<double> normal;
  const auto random_dir = [&]() {
    std::vector<double> u(n);
    double norm = 0;
    do {
      for (double& v : u) v = normal(gen);
      basis.project(u);
      norm = 0;
      for (double v : u) norm += v * v;
    } while (norm < 1e-12);
    for (double& v : u) v /= std::sqrt(norm);
    return u;
  };

  const double star_radius = 1e-7;
  const int max_rounds = 400;
  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    std::vector<std::vector<double>> dirs = axes;
    if (round == 0 && !last_dir.empty()) dirs.push_back(last_dir);
    for (int extra = 0; extra < 4; ++extra) dirs.push_back(random_dir());
    for (const auto& u : dirs) {
      const auto slice = [&](double s) {
        std::vector<double> g = best_f;
        for (size_t i = 0; i < n; ++i) g[i] += s * u[i];
        return value(g);
      };
      double s = golden_section(slice, -range, range, 1e-13 * range);
      double v = slice(s);
      if (v < best - 1e-15 * std::max(1.0, std::abs(best))) {
        for (size_t i = 0; i < n; ++i) best_f[i] += s * u[i];
        basis.project(best_f);
        best = value(best_f);
        improved = true;
      }
    }
    if (improved) continue;
    bool certified = true;
    for (const auto& u : axes) {
      for (double sgn : {-1.0, 1.0}) {
        std::vector<double> g = best_f;
        for (size_t i = 0; i < n; ++i) g[i] += sgn * star_radius * u[i];
        if (value(g) < best - 1e-12) certified = false;
      }
    }
    if (certified) break;
  }
  return best;
}

bool check_corrector(const Profile& profile, const AtomicMedium& medium, double tol) {
  auto [lo, hi] = infsup_bounds(profile, medium);
  return hi - lo <= tol;
}

std::pair<double, double> infsup_bounds(const Profile& profile, const AtomicMedium& medium) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int k : medium.support()) {
    double v = h_sym(profile.f[k], profile.p, medium.atoms[k]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace fpct
