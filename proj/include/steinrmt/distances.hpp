#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace steinrmt {

/// Centered Gaussian with covariance diag(p/4), p = 1..d.
struct GaussianTarget {
  std::vector<double> variances;

  static GaussianTarget chebyshev_limit(int d);
  int dimension() const { return static_cast<int>(variances.size()); }
};

double normal_cdf(double x);
double normal_quantile(double u);

/// W1 between the empirical law of samples and N(mean, variance):
/// the area between the two CDFs, integrated in closed form on every gap
/// between order statistics (split where the Gaussian CDF crosses the
/// empirical step). Throws std::invalid_argument for fewer than two samples
/// or a non-positive variance.
double w1_empirical_vs_gaussian_1d(std::span<const double> samples, double mean, double variance);

/// Average 1D W1 over random unit directions u, against N(0, u^T Sigma u).
/// rows are d-dimensional samples. A surrogate for the multivariate distance,
/// not the distance itself. For d = 1 only the direction +1 is used.
double sliced_w1(const std::vector<std::vector<double>>& rows, const GaussianTarget& target, int directions,
                 std::uint64_t seed);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace steinrmt
