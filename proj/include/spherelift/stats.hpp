#ifndef SPHERELIFT_STATS_HPP
#define SPHERELIFT_STATS_HPP

#include <functional>
#include <span>
#include <vector>

namespace spherelift {

// median of a copy of the data (even length: mean of the middle pair)
double median(std::vector<double> v);

// median absolute deviation around the median
double median_abs_dev(const std::vector<double>& v);

double mean(std::span<const double> v);

// sample standard deviation (n-1 in the denominator)
double sample_std(std::span<const double> v);

// slope of the least-squares line through (x_i, y_i)
double least_squares_slope(std::span<const double> x, std::span<const double> y);

// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Critical value at significance alpha (supported: 0.01, 0.05) with the
// Stephens small-sample denominator sqrt(n) + 0.12 + 0.11/sqrt(n).
double ks_critical(size_t n, double alpha);

}  // namespace spherelift

#endif
