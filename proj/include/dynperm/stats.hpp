#ifndef DYNPERM_STATS_HPP
#define DYNPERM_STATS_HPP

#include <functional>
#include <vector>

namespace dynperm {

// One-sample Kolmogorov-Smirnov statistic
//   sup_i max(|i/R - F(x_i)|, |(i-1)/R - F(x_i)|)
// over the sorted samples. +inf samples are allowed and get F = 1.
// Throws InsufficientData on empty input.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample statistic sup_x |F_x(x) - F_y(x)|.
double ks_two_sample(std::vector<double> x, std::vector<double> y);

// Linearly interpolated quantile (q in [0, 1]) of finite values.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double mean(const std::vector<double>& values);

}  // namespace dynperm

#endif  // DYNPERM_STATS_HPP
