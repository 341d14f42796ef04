#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinrmt/experiment.hpp"

namespace steinrmt {

struct RateFit {
  std::string metric;
  std::vector<double> n;
  std::vector<double> values;
  std::vector<double> standard_errors;
  double slope = 0;
  double intercept = 0;  ///< log(value) ~ intercept + slope log(n)
  double slope_ci_low = 0;
  double slope_ci_high = 0;
  std::vector<double> residuals;       ///< log(value) - fitted, per point
  std::vector<double> segment_slopes;  ///< between consecutive points
  /// Local slope flattens by more than 0.2 from the first to the last segment.
  bool floor_suspected = false;
  std::vector<std::string> warnings;
};

/// Least squares of log(value) on log(n). The confidence interval is a
/// 95% percentile bootstrap that redraws each point from N(value, stderr^2)
/// and refits. Non-positive values are dropped with a warning; fewer than
/// three usable points throws std::invalid_argument.
RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& values,
                 const std::vector<double>& standard_errors, const std::string& metric = "",
                 std::size_t bootstrap = 2000, std::uint64_t seed = 0);
RateFit rate_fit(const ResultTable& table, const std::string& metric, std::size_t bootstrap = 2000,
                 std::uint64_t seed = 0);

/// Log-log scatter with the fitted line, as a standalone SVG document.
std::string rate_plot_svg(const RateFit& fit);

}  // namespace steinrmt
