#include "dynperm/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dynperm/errors.hpp"

namespace dynperm {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InsufficientData("KS statistic of an empty sample");
    std::sort(samples.begin(), samples.end());
    const double R = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 1; i <= samples.size(); ++i) {
        const double x = samples[i - 1];
        const double F = std::isinf(x) && x > 0 ? 1.0 : cdf(x);
        d = std::max({d, std::abs(static_cast<double>(i) / R - F),
                      std::abs(static_cast<double>(i - 1) / R - F)});
    }
    return d;
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw InsufficientData("KS statistic of an empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InsufficientData("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    q = std::clamp(q, 0.0, 1.0);
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return values[lo];
    return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double mean(const std::vector<double>& values) {
    if (values.empty()) throw InsufficientData("mean of an empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

}  // namespace dynperm
