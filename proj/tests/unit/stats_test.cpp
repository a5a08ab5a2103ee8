#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kofn/parallel.hpp"
#include "kofn/random.hpp"
#include "kofn/stats.hpp"

namespace kofn {
namespace {

TEST(Stats, RunningStatsAndMerge) {
  RunningStats a, b, all;
  for (double x : {1.0, 2.0, 3.0}) {
    a.add(x);
    all.add(x);
  }
  for (double x : {4.0, 10.0}) {
    b.add(x);
    all.add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), 5u);
  EXPECT_DOUBLE_EQ(a.mean(), 4.0);
  EXPECT_DOUBLE_EQ(a.variance(), all.variance());
  EXPECT_DOUBLE_EQ(a.variance(), 12.5);
  EXPECT_DOUBLE_EQ(a.estimate().std_error, std::sqrt(12.5 / 5));
}

TEST(Stats, ProportionsAndZScores) {
  const auto e = proportion_estimate(30, 100);
  EXPECT_DOUBLE_EQ(e.mean, 0.3);
  EXPECT_NEAR(e.std_error, std::sqrt(0.3 * 0.7 / 99), 1e-15);
  EXPECT_NEAR(e.z_score(0.3 + 2 * e.std_error), 2.0, 1e-12);
  const Estimate exact{0.5, 0.0, 10};
  EXPECT_EQ(exact.z_score(0.5), 0.0);
  EXPECT_EQ(exact.z_score(0.6), std::numeric_limits<double>::infinity());
}

TEST(Stats, LineFitOnExactData) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.points, 4u);
}

TEST(Stats, SlopeIntervalUsesStudentT) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{0.1, 0.9, 2.2, 2.8, 4.1};
  const auto f = fit_line(x, y);
  const auto [lo, hi] = f.slope_interval(0.95);
  // t_{0.975, 3} = 3.182446305...
  EXPECT_NEAR(hi - f.slope, 3.1824463 * f.slope_std_error, 1e-6);
  EXPECT_NEAR(f.slope - lo, hi - f.slope, 1e-12);
}

TEST(Stats, ChiSquareAndTotalVariation) {
  EXPECT_NEAR(chi_square_critical(1, 0.05), 3.841459, 1e-5);
  EXPECT_NEAR(chi_square_critical(10, 0.001), 29.588298, 1e-5);
  const std::vector<double> obs{10, 20, 30};
  const std::vector<double> exp{20, 20, 20};
  EXPECT_DOUBLE_EQ(chi_square_statistic(obs, exp), 10.0);
  const std::vector<double> p{0.5, 0.5, 0.0};
  const std::vector<double> q{0.25, 0.25, 0.5};
  EXPECT_DOUBLE_EQ(total_variation(p, q), 0.5);
}

TEST(Random, StreamSplitIsDocumentedFunction) {
  EXPECT_EQ(stream_seed(7, 3), splitmix64(splitmix64(7) ^ splitmix64(4)));
  EXPECT_NE(stream_seed(7, 3), stream_seed(7, 4));
  // Reference value of SplitMix64 from seed 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Random, UniformBelowIsInRangeAndUnbiased) {
  Rng rng(1);
  std::vector<double> counts(7, 0.0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = uniform_below(rng, 7);
    ASSERT_LT(v, 7u);
    counts[v] += 1;
  }
  const std::vector<double> expected(7, 10000.0);
  EXPECT_LT(chi_square_statistic(counts, expected), chi_square_critical(6, 0.001));
}

TEST(Parallel, SharesAndDeterministicMerge) {
  std::size_t total = 0;
  for (unsigned w = 0; w < 4; ++w) total += worker_share(10, 4, w);
  EXPECT_EQ(total, 10u);
  EXPECT_EQ(worker_share(10, 4, 0), 3u);
  EXPECT_EQ(worker_share(10, 4, 3), 2u);
  auto body = [](Rng& rng, std::size_t count) {
    RunningStats s;
    for (std::size_t i = 0; i < count; ++i) s.add(uniform01(rng));
    return s;
  };
  const auto a = parallel_accumulate<RunningStats>(1000, ParallelOptions{5, 3}, body);
  const auto b = parallel_accumulate<RunningStats>(1000, ParallelOptions{5, 3}, body);
  EXPECT_EQ(a.count(), 1000u);
  EXPECT_EQ(a.mean(), b.mean());
  std::vector<int> hit(100, 0);
  parallel_for_index(100, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
}

}  // namespace
}  // namespace kofn
