#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fpct {
namespace stats {

double mean(std::span<const double> xs);
double sample_sd(std::span<const double> xs);

// Two-sided 95% Student-t quantile for the given degrees of freedom.
double student_t_975(int dof);

// Half-width of a 95% confidence interval for the mean of xs.  Zero for
// fewer than two samples.
double t_half_width(std::span<const double> xs);

// Two-sample Kolmogorov-Smirnov statistic, sup_x |F1 - F2| of the
// empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace stats
}  // namespace fpct
