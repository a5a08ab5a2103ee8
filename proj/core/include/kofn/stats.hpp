#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kofn {

// A Monte Carlo estimate: sample mean and standard error of the mean.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;

  // |mean - reference| / std_error; infinity when std_error is 0 and the
  // estimate is off, 0 when it is exact.
  double z_score(double reference) const;
  bool within(double reference, double sigmas) const {
    return z_score(reference) <= sigmas;
  }
};

// Streaming sums for mean/variance of a scalar sample.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void merge(const RunningStats& other) {
    count_ += other.count_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
  }
  std::size_t count() const { return count_; }
  double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
  // Unbiased sample variance.
  double variance() const;
  Estimate estimate() const;

 private:
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

// Estimate of a Bernoulli proportion from hit counts.
Estimate proportion_estimate(std::size_t hits, std::size_t samples);

// Estimate of the mean of a non-negative integer variable from its sum and
// sum of squares.
Estimate mean_estimate(double sum, double sum_sq, std::size_t samples);

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double intercept_std_error = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  std::vector<double> residuals;

  // Two-sided confidence interval for the slope from Student's t with
  // points - 2 degrees of freedom.
  std::pair<double, double> slope_interval(double level = 0.95) const;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Pearson chi-square statistic of observed counts against expected counts.
double chi_square_statistic(std::span<const double> observed,
                            std::span<const double> expected);

// Upper critical value of chi-square with `dof` degrees of freedom at the
// given significance level (e.g. 0.001).
double chi_square_critical(double dof, double level);

// Total-variation distance between two probability vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace kofn
