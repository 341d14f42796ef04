#include "steinrmt/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steinrmt/ensembles.hpp"
#include "steinrmt/rational.hpp"

namespace steinrmt {

namespace {

std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& values,
                 const std::vector<double>& standard_errors, const std::string& metric, std::size_t bootstrap,
                 std::uint64_t seed) {
  if (n.size() != values.size() || n.size() != standard_errors.size()) {
    throw std::invalid_argument("rate fit inputs differ in length");
  }
  RateFit fit;
  fit.metric = metric;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(values[i] > 0) || !(n[i] > 0)) {
      fit.warnings.push_back("dropped non-positive point at n=" + shortest_repr(n[i]));
      continue;
    }
    fit.n.push_back(n[i]);
    fit.values.push_back(values[i]);
    fit.standard_errors.push_back(standard_errors[i]);
  }
  if (fit.n.size() < 3) throw std::invalid_argument("rate fit needs at least three positive points");

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.n.size(); ++i) {
    lx.push_back(std::log(fit.n[i]));
    ly.push_back(std::log(fit.values[i]));
  }
  std::tie(fit.slope, fit.intercept) = least_squares(lx, ly);
  for (std::size_t i = 0; i < lx.size(); ++i) fit.residuals.push_back(ly[i] - (fit.intercept + fit.slope * lx[i]));
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) fit.segment_slopes.push_back((ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]));
  fit.floor_suspected = fit.segment_slopes.back() - fit.segment_slopes.front() > 0.2;
  if (fit.floor_suspected) fit.warnings.push_back("local slope flattens at large n; possible noise floor");

  const bool noisy = std::any_of(fit.standard_errors.begin(), fit.standard_errors.end(), [](double s) { return s > 0; });
  if (!noisy || bootstrap == 0) {
    fit.slope_ci_low = fit.slope_ci_high = fit.slope;
    return fit;
  }
  std::vector<double> slopes;
  slopes.reserve(bootstrap);
  std::vector<double> by(ly.size());
  for (std::size_t b = 0; b < bootstrap; ++b) {
    Rng rng = replica_rng(seed, Stream::bootstrap, b);
    std::normal_distribution<double> normal;
    bool ok = true;
    for (std::size_t i = 0; i < ly.size(); ++i) {
      const double v = fit.values[i] + fit.standard_errors[i] * normal(rng);
      if (!(v > 0)) {
        ok = false;
        break;
      }
      by[i] = std::log(v);
    }
    if (ok) slopes.push_back(least_squares(lx, by).first);
  }
  if (slopes.size() < bootstrap / 2) fit.warnings.push_back("many bootstrap draws were non-positive");
  if (slopes.empty()) {
    fit.slope_ci_low = fit.slope_ci_high = fit.slope;
  } else {
    fit.slope_ci_low = percentile(slopes, 0.025);
    fit.slope_ci_high = percentile(slopes, 0.975);
  }
  return fit;
}

RateFit rate_fit(const ResultTable& table, const std::string& metric, std::size_t bootstrap, std::uint64_t seed) {
  std::vector<double> n, v, se;
  for (const auto& r : table.metric_rows(metric)) {
    n.push_back(r.n);
    v.push_back(r.value);
    se.push_back(r.standard_error);
  }
  return fit_rate(n, v, se, metric, bootstrap, seed);
}

std::string rate_plot_svg(const RateFit& fit) {
  constexpr double width = 640, height = 480, margin = 60;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.n.size(); ++i) {
    lx.push_back(std::log10(fit.n[i]));
    ly.push_back(std::log10(fit.values[i]));
  }
  double x0 = *std::min_element(lx.begin(), lx.end()), x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(ly.begin(), ly.end()), y1 = *std::max_element(ly.begin(), ly.end());
  const double padx = std::max(0.05, 0.05 * (x1 - x0)), pady = std::max(0.05, 0.05 * (y1 - y0));
  x0 -= padx;
  x1 += padx;
  y0 -= pady;
  y1 += pady;
  auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + num(margin) + "\" y1=\"" + num(height - margin) + "\" x2=\"" + num(width - margin) +
         "\" y2=\"" + num(height - margin) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(margin) + "\" y1=\"" + num(margin) + "\" x2=\"" + num(margin) + "\" y2=\"" +
         num(height - margin) + "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    svg += "<circle cx=\"" + num(px(lx[i])) + "\" cy=\"" + num(py(ly[i])) + "\" r=\"4\" fill=\"steelblue\"/>\n";
    svg += "<text x=\"" + num(px(lx[i])) + "\" y=\"" + num(height - margin + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + shortest_repr(fit.n[i]) + "</text>\n";
  }
  // The fit is in natural logs; convert to log10 coordinates.
  const double ln10 = std::log(10.0);
  auto fitted = [&](double x) { return (fit.intercept + fit.slope * x * ln10) / ln10; };
  const double a = lx.front(), b = lx.back();
  svg += "<line x1=\"" + num(px(a)) + "\" y1=\"" + num(py(fitted(a))) + "\" x2=\"" + num(px(b)) + "\" y2=\"" +
         num(py(fitted(b))) + "\" stroke=\"firebrick\" stroke-width=\"2\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"30\" font-size=\"14\" text-anchor=\"middle\">" + fit.metric +
         ": slope " + num(fit.slope) + " [" + num(fit.slope_ci_low) + ", " + num(fit.slope_ci_high) + "]</text>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 15) +
         "\" font-size=\"12\" text-anchor=\"middle\">n (log scale)</text>\n";
  svg += "<text x=\"18\" y=\"" + num(height / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(height / 2) + ")\">value (log scale)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace steinrmt
