#include "fpct/distcompare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace fpct {

MarginalSpec MarginalSpec::uniform_interval(double lo, double hi) {
  if (!(0 < lo && lo < hi)) throw std::invalid_argument("uniform marginal needs 0 < lo < hi");
  MarginalSpec m;
  m.kind_ = Kind::UniformInterval;
  m.lo_ = lo;
  m.hi_ = hi;
  return m;
}

MarginalSpec MarginalSpec::finite_atoms(std::vector<double> values, std::vector<double> probs) {
  if (values.empty() || values.size() != probs.size())
    throw std::invalid_argument("atomic marginal needs matching nonempty values/probs");
  std::map<double, double> merged;
  double total = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0)) throw std::invalid_argument("atom values must be positive");
    if (probs[i] < 0) throw std::invalid_argument("atom probabilities must be nonnegative");
    merged[values[i]] += probs[i];
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("atom probabilities must sum to 1");
  MarginalSpec m;
  m.kind_ = Kind::FiniteAtoms;
  double cum = 0;
  for (const auto& [x, p] : merged) {
    cum += p;
    m.xs_.push_back(x);
    m.us_.push_back(cum);
  }
  m.us_.back() = 1.0;
  m.lo_ = m.xs_.front();
  m.hi_ = m.xs_.back();
  return m;
}

MarginalSpec MarginalSpec::piecewise_linear(std::vector<double> x, std::vector<double> u) {
  if (x.size() < 2 || x.size() != u.size())
    throw std::invalid_argument("piecewise-linear CDF needs >= 2 matching nodes");
  if (u.front() != 0.0 || u.back() != 1.0)
    throw std::invalid_argument("piecewise-linear CDF must run from 0 to 1");
  for (size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("CDF abscissae must be increasing");
    if (u[i] < u[i - 1]) throw std::invalid_argument("CDF must be nondecreasing");
  }
  if (!(x.front() > 0)) throw std::invalid_argument("support must be positive");
  MarginalSpec m;
  m.kind_ = Kind::PiecewiseLinear;
  m.xs_ = std::move(x);
  m.us_ = std::move(u);
  m.lo_ = m.xs_.front();
  m.hi_ = m.xs_.back();
  return m;
}

MarginalSpec MarginalSpec::from_distribution(const WeightDistribution& dist, int axis) {
  switch (dist.kind()) {
    case WeightDistribution::Kind::UniformInterval:
      return uniform_interval(dist.uniform_lo(), dist.uniform_hi());
    case WeightDistribution::Kind::FiniteAtoms: {
      std::vector<double> values;
      for (const auto& atom : dist.atoms())
        values.push_back(atom.size() == 1 ? atom[0] : atom.at(static_cast<size_t>(axis)));
      return finite_atoms(std::move(values), dist.probs());
    }
    case WeightDistribution::Kind::InverseCdfTable: {
      // The table maps u -> value; invert it into CDF nodes.  Repeated values
      // (jumps in F) are not representable as a piecewise-linear CDF.
      const auto& pts = dist.table();
      std::vector<double> x, u;
      for (const auto& [uu, vv] : pts) {
        if (!x.empty() && !(vv > x.back()))
          throw std::invalid_argument("inverse-CDF table is not strictly increasing in value");
        x.push_back(vv);
        u.push_back(uu);
      }
      return piecewise_linear(std::move(x), std::move(u));
    }
  }
  throw std::logic_error("unreachable");
}

double MarginalSpec::cdf(double x) const {
  if (x < lo_) return 0;
  if (x >= hi_) return 1;
  switch (kind_) {
    case Kind::UniformInterval:
      return (x - lo_) / (hi_ - lo_);
    case Kind::FiniteAtoms: {
      // Sum of probabilities of atoms <= x.
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      return it == xs_.begin() ? 0.0 : us_[static_cast<size_t>(it - xs_.begin()) - 1];
    }
    case Kind::PiecewiseLinear: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const size_t j = static_cast<size_t>(it - xs_.begin());  // xs_[j-1] <= x < xs_[j]
      const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return us_[j - 1] + t * (us_[j] - us_[j - 1]);
    }
  }
  throw std::logic_error("unreachable");
}

double MarginalSpec::cdf_left(double x) const {
  if (kind_ != Kind::FiniteAtoms) return x <= lo_ ? 0.0 : (x > hi_ ? 1.0 : cdf(x));
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);  // atoms strictly below x
  return it == xs_.begin() ? 0.0 : us_[static_cast<size_t>(it - xs_.begin()) - 1];
}

double MarginalSpec::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("probability outside [0, 1]");
  switch (kind_) {
    case Kind::UniformInterval:
      return lo_ + u * (hi_ - lo_);
    case Kind::FiniteAtoms: {
      auto it = std::lower_bound(us_.begin(), us_.end(), u);  // first cum >= u
      return xs_[std::min<size_t>(static_cast<size_t>(it - us_.begin()), xs_.size() - 1)];
    }
    case Kind::PiecewiseLinear: {
      auto it = std::lower_bound(us_.begin(), us_.end(), u);
      size_t j = static_cast<size_t>(it - us_.begin());
      if (j == 0) return xs_.front();
      if (j >= us_.size()) return xs_.back();
      if (us_[j] == us_[j - 1]) return xs_[j];  // flat CDF piece: inf is the right node
      const double t = (u - us_[j - 1]) / (us_[j] - us_[j - 1]);
      return xs_[j - 1] + t * (xs_[j] - xs_[j - 1]);
    }
  }
  throw std::logic_error("unreachable");
}

double MarginalSpec::density_floor() const {
  switch (kind_) {
    case Kind::UniformInterval:
      return 1.0 / (hi_ - lo_);
    case Kind::FiniteAtoms:
      return 0.0;
    case Kind::PiecewiseLinear: {
      double floor = std::numeric_limits<double>::infinity();
      for (size_t i = 1; i < xs_.size(); ++i)
        floor = std::min(floor, (us_[i] - us_[i - 1]) / (xs_[i] - xs_[i - 1]));
      return floor;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> MarginalSpec::breakpoints() const {
  if (kind_ == Kind::UniformInterval) return {lo_, hi_};
  return xs_;
}

std::vector<double> MarginalSpec::probability_breakpoints() const {
  std::vector<double> out = {0.0, 1.0};
  for (double x : breakpoints()) {
    out.push_back(cdf(x));
    out.push_back(cdf_left(x));
  }
  return out;
}

double skorokhod_values(const MarginalSpec& F, double u) { return F.quantile(u); }

double kolmogorov_distance(const MarginalSpec& F1, const MarginalSpec& F2, int mesh) {
  std::vector<double> xs = F1.breakpoints();
  const std::vector<double> b2 = F2.breakpoints();
  xs.insert(xs.end(), b2.begin(), b2.end());
  if (mesh > 0) {
    const double lo = std::min(F1.support_lo(), F2.support_lo());
    const double hi = std::max(F1.support_hi(), F2.support_hi());
    for (int i = 0; i <= mesh; ++i) xs.push_back(lo + (hi - lo) * i / mesh);
  }
  double sup = 0;
  for (double x : xs) {
    sup = std::max(sup, std::abs(F1.cdf(x) - F2.cdf(x)));
    sup = std::max(sup, std::abs(F1.cdf_left(x) - F2.cdf_left(x)));
  }
  return sup;
}

CouplingGapBound coupling_gap_bound(const MarginalSpec& F1, const MarginalSpec& F2) {
  CouplingGapBound out;
  out.rho_star = std::min(F1.density_floor(), F2.density_floor());
  if (!(out.rho_star > 0))
    throw std::domain_error("coupling bound unavailable: density floor is zero");
  out.ks = kolmogorov_distance(F1, F2);
  out.sup_gap_bound = out.ks / out.rho_star;
  std::vector<double> us = F1.probability_breakpoints();
  const std::vector<double> u2 = F2.probability_breakpoints();
  us.insert(us.end(), u2.begin(), u2.end());
  const int kMesh = 100000;
  for (int i = 0; i <= kMesh; ++i) us.push_back(static_cast<double>(i) / kMesh);
  for (double u : us)
    out.mesh_sup_gap = std::max(out.mesh_sup_gap, std::abs(F1.quantile(u) - F2.quantile(u)));
  out.ok = out.mesh_sup_gap <= out.sup_gap_bound * (1 + 1e-12) + 1e-12;
  return out;
}

GapBound gap_bound_primal(const BoundsSpec& m1, const BoundsSpec& m2, double coupling_dist) {
  if (coupling_dist < 0) throw std::invalid_argument("coupling distance must be >= 0");
  return {std::max(m1.b / m1.a, m2.b / m2.a) * coupling_dist, "primal"};
}

GapBound gap_bound_dual(const BoundsSpec& m1, const BoundsSpec& m2, double coupling_dist) {
  if (coupling_dist < 0) throw std::invalid_argument("coupling distance must be >= 0");
  const double ratio = std::max(m1.b / m1.a, m2.b / m2.a);
  return {ratio * (m1.b * m2.b) / (m1.a * m2.a) * coupling_dist, "dual"};
}

EmpiricalGapReport empirical_gap_check(const EnvironmentSpec& spec1, const EnvironmentSpec& spec2,
                                       const std::vector<double>& x, int n, int seeds,
                                       int threads) {
  if (spec1.kind != EnvironmentSpec::Kind::IidEdges ||
      spec2.kind != EnvironmentSpec::Kind::IidEdges)
    throw std::invalid_argument("empirical gap check needs iid-edges media");
  if (spec1.d != spec2.d) throw std::invalid_argument("media dimensions differ");
  EnvironmentSpec coupled2 = spec2;
  coupled2.seed = spec1.seed;  // shared uniforms through both inverse CDFs

  EmpiricalGapReport report;
  double l1 = 0;
  for (double c : x) l1 += std::abs(c);
  if (l1 == 0) {
    report.ok = true;
    return report;
  }
  EstimateOptions opts;
  opts.threads = threads;
  const std::vector<int> n_values = {std::max(1, n / 4), std::max(1, n / 2), n};
  report.estimate1 = estimate_time_constant(spec1, x, n_values, seeds, opts);
  report.estimate2 = estimate_time_constant(coupled2, x, n_values, seeds, opts);
  report.measured_gap = std::abs(report.estimate1.estimate - report.estimate2.estimate) / l1;
  report.ci = (report.estimate1.half_width + report.estimate2.half_width) / l1;
  report.ks = kolmogorov_distance(MarginalSpec::from_distribution(spec1.distribution),
                                  MarginalSpec::from_distribution(spec2.distribution));
  const BoundsSpec b1 = spec1.distribution.support_bounds();
  const BoundsSpec b2 = spec2.distribution.support_bounds();
  report.primal_bound = gap_bound_primal(b1, b2, report.ks).value;
  report.ok = report.measured_gap <= report.primal_bound + report.ci + 1e-12;
  return report;
}

}  // namespace fpct
