#include "fpct/stats.hpp"

#include <algorithm>
#include <cmath>

namespace fpct {
namespace stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  double m = mean(xs), s = 0;
  for (double v : xs) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(n - 1));
}

double student_t_975(int dof) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) return 0.0;
  if (dof <= 30) return table[dof - 1];
  return 1.960 + 2.4 / static_cast<double>(dof);
}

double t_half_width(std::span<const double> xs) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  return student_t_975(static_cast<int>(n) - 1) * sample_sd(xs) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double best = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

}  // namespace stats
}  // namespace fpct
