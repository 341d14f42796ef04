#include "steinrmt/distances.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steinrmt/ensembles.hpp"

namespace steinrmt {

GaussianTarget GaussianTarget::chebyshev_limit(int d) {
  GaussianTarget t;
  for (int p = 1; p <= d; ++p) t.variances.push_back(p / 4.0);
  return t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal quantile outside (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Antiderivative of the standard normal CDF, vanishing at -infinity.
double cdf_integral(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// Integral of (level - Phi) over [a, b] where the sign is constant.
double signed_area(double level, double a, double b) { return level * (b - a) - (cdf_integral(b) - cdf_integral(a)); }

double abs_area(double level, double a, double b) {
  if (b <= a) return 0.0;
  if (level <= 0.0) return cdf_integral(b) - cdf_integral(a);
  if (level >= 1.0) return (b - a) - (cdf_integral(b) - cdf_integral(a));
  const double cross = normal_quantile(level);
  if (cross <= a) return -signed_area(level, a, b);
  if (cross >= b) return signed_area(level, a, b);
  return signed_area(level, a, cross) - signed_area(level, cross, b);
}

}  // namespace

double w1_empirical_vs_gaussian_1d(std::span<const double> samples, double mean, double variance) {
  if (samples.size() < 2) throw std::invalid_argument("W1 estimator needs at least two samples");
  if (!(variance > 0.0)) throw std::invalid_argument("degenerate Gaussian variance");
  const double sd = std::sqrt(variance);
  std::vector<double> z(samples.begin(), samples.end());
  for (auto& v : z) v = (v - mean) / sd;
  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  double total = cdf_integral(z.front()) + cdf_integral(-z.back());
  for (std::size_t i = 0; i + 1 < z.size(); ++i) total += abs_area((i + 1) / m, z[i], z[i + 1]);
  return sd * total;
}

double sliced_w1(const std::vector<std::vector<double>>& rows, const GaussianTarget& target, int directions,
                 std::uint64_t seed) {
  const int d = target.dimension();
  if (d < 1) throw std::invalid_argument("target dimension must be positive");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != d) throw std::invalid_argument("sample dimension differs from target");
  std::vector<double> projected(rows.size());
  if (d == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) projected[i] = rows[i][0];
    return w1_empirical_vs_gaussian_1d(projected, 0.0, target.variances[0]);
  }
  if (directions < 1) throw std::invalid_argument("need at least one direction");
  double total = 0.0;
  for (int s = 0; s < directions; ++s) {
    Rng rng = replica_rng(seed, Stream::directions, static_cast<std::uint64_t>(s));
    std::normal_distribution<double> normal;
    std::vector<double> u(d);
    double norm = 0.0;
    for (auto& x : u) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    double var = 0.0;
    for (int k = 0; k < d; ++k) {
      u[k] /= norm;
      var += u[k] * u[k] * target.variances[k];
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double v = 0.0;
      for (int k = 0; k < d; ++k) v += u[k] * rows[i][k];
      projected[i] = v;
    }
    total += w1_empirical_vs_gaussian_1d(projected, 0.0, var);
  }
  return total / directions;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
  }
  const double ne = static_cast<double>(x.size()) * y.size() / (x.size() + y.size());
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  double q = 0.0;
  if (lambda < 1e-3) {
    q = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
      q += term;
      if (std::abs(term) < 1e-12) break;
      sign = -sign;
    }
  }
  return KsResult{d, std::clamp(q, 0.0, 1.0)};
}

}  // namespace steinrmt
