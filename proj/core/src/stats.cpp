#include "kofn/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <limits>

#include "kofn/errors.hpp"

namespace kofn {

double Estimate::z_score(double reference) const {
  const double diff = std::abs(mean - reference);
  if (std_error > 0.0) return diff / std_error;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double RunningStats::variance() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double v = (sum_sq_ - sum_ * sum_ / n) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

Estimate RunningStats::estimate() const {
  Estimate e;
  e.samples = count_;
  e.mean = mean();
  e.std_error = count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  return e;
}

Estimate proportion_estimate(std::size_t hits, std::size_t samples) {
  const double h = static_cast<double>(hits);
  return mean_estimate(h, h, samples);
}

Estimate mean_estimate(double sum, double sum_sq, std::size_t samples) {
  Estimate e;
  e.samples = samples;
  if (samples == 0) return e;
  const double n = static_cast<double>(samples);
  e.mean = sum / n;
  if (samples > 1) {
    double var = (sum_sq - sum * sum / n) / (n - 1.0);
    if (var < 0.0) var = 0.0;
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

std::pair<double, double> LinearFit::slope_interval(double level) const {
  if (points < 3) {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  boost::math::students_t dist(static_cast<double>(points - 2));
  const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
  return {slope - t * slope_std_error, slope + t * slope_std_error};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit_line needs equally many x and y values");
  if (x.size() < 2) throw DomainError("fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line needs at least two distinct x values");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.residuals.push_back(r);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) {
    const double s2 = sse / (n - 2.0);
    fit.slope_std_error = std::sqrt(s2 / sxx);
    fit.intercept_std_error = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return fit;
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw DimensionError("chi-square needs matching observed and expected vectors");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      if (observed[i] > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

double chi_square_critical(double dof, double level) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, level));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("total variation needs equal-length vectors");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

}  // namespace kofn
