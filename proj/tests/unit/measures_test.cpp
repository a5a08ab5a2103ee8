#include <gtest/gtest.h>

#include <map>

#include "kofn/errors.hpp"
#include "kofn/measures.hpp"
#include "kofn/stats.hpp"
#include "oracles.hpp"

namespace kofn {
namespace {

TEST(Configuration, StringRoundTripAndPopcount) {
  const auto c = Configuration::from_string("0110100");
  EXPECT_EQ(c.size(), 7u);
  EXPECT_EQ(c.ones(), 3u);
  EXPECT_EQ(c.to_string(), "0110100");
  EXPECT_TRUE(c[1]);
  EXPECT_FALSE(c[0]);
  EXPECT_THROW(c.at(7), IndexError);
}

TEST(Configuration, FlipAndSwapKeepCountsConsistent) {
  auto c = Configuration::from_string("1010");
  EXPECT_EQ(c.flipped(1).to_string(), "1110");
  EXPECT_EQ(c.swapped(0, 1).to_string(), "0110");
  c.exchange(2, 3);
  EXPECT_EQ(c.to_string(), "1001");
  EXPECT_EQ(c.ones(), 2u);
  c.toggle(0);
  EXPECT_EQ(c.ones(), 1u);
}

TEST(Configuration, WideConfigurationsSpanWords) {
  Configuration c(130);
  c.set(0, true);
  c.set(64, true);
  c.set(129, true);
  EXPECT_EQ(c.ones(), 3u);
  EXPECT_EQ(c.one_positions(), (std::vector<Element>{0, 64, 129}));
  EXPECT_EQ(c.hamming_distance(Configuration(130)), 3u);
}

TEST(Configuration, OrderIsLexicographicFromElementZero) {
  EXPECT_LT(Configuration::from_string("001"), Configuration::from_string("010"));
  EXPECT_LT(Configuration::from_string("010"), Configuration::from_string("100"));
  EXPECT_TRUE(Configuration::from_string("0101").leq(Configuration::from_string("1101")));
  EXPECT_FALSE(Configuration::from_string("0101").leq(Configuration::from_string("1001")));
}

TEST(Binomial, SmallAndLargeValues) {
  EXPECT_EQ(binomial(10, 5), 252);
  EXPECT_EQ(binomial(4, 7), 0);
  EXPECT_EQ(binomial(100, 50).get_str(), "100891344545564193334812497256");
}

class EnumerationTest : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(EnumerationTest, MatchesFilteredCubeInOrder) {
  const auto [n, k] = GetParam();
  KOutOfN measure(n, k);
  std::vector<Configuration> got;
  for (const auto& c : measure.enumerate()) got.push_back(c);
  EXPECT_EQ(got, oracle::weight_k(n, k));
  EXPECT_EQ(BigInt(got.size()), measure.support_size());
}

INSTANTIATE_TEST_SUITE_P(Small, EnumerationTest,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{1, 0},
                                           std::pair<std::size_t, std::size_t>{1, 1},
                                           std::pair<std::size_t, std::size_t>{4, 2},
                                           std::pair<std::size_t, std::size_t>{6, 1},
                                           std::pair<std::size_t, std::size_t>{7, 3},
                                           std::pair<std::size_t, std::size_t>{8, 8},
                                           std::pair<std::size_t, std::size_t>{10, 5}));

TEST(KOutOfN, MassIsUniformOnTheSupport) {
  KOutOfN measure(6, 2);
  Rational total = 0;
  for (const auto& c : oracle::all_configurations(6)) total += measure.mass(c);
  EXPECT_EQ(total, 1);
  EXPECT_EQ(measure.mass(Configuration::from_string("110000")), Rational(1, 15));
  EXPECT_EQ(measure.mass(Configuration::from_string("111000")), 0);
  EXPECT_THROW(measure.mass(Configuration(5)), DimensionError);
}

TEST(KOutOfN, RejectsBadParameters) {
  EXPECT_THROW(KOutOfN(4, 5), DomainError);
  EXPECT_THROW(KOutOfN(40, 20).check_enumerable(1000), ResourceError);
}

TEST(KOutOfN, SamplesAreUniformByChiSquare) {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{6, 2}, {6, 4}, {5, 0}, {7, 3}}) {
    KOutOfN measure(n, k);
    Rng rng(99 + n + k);
    std::map<Configuration, double> counts;
    const std::size_t draws = 60000;
    for (std::size_t i = 0; i < draws; ++i) {
      const auto c = measure.sample(rng);
      ASSERT_EQ(c.ones(), k);
      counts[c] += 1;
    }
    const auto support = oracle::weight_k(n, k);
    std::vector<double> observed, expected;
    for (const auto& c : support) {
      observed.push_back(counts[c]);
      expected.push_back(static_cast<double>(draws) / static_cast<double>(support.size()));
    }
    if (support.size() > 1) {
      EXPECT_LT(chi_square_statistic(observed, expected),
                chi_square_critical(static_cast<double>(support.size() - 1), 0.001));
    }
  }
}

TEST(KOutOfN, SampleIntoMatchesSample) {
  KOutOfN measure(130, 40);
  Rng a(5), b(5);
  Configuration out;
  std::vector<Element> scratch;
  for (int i = 0; i < 50; ++i) {
    measure.sample_into(a, out, scratch);
    EXPECT_EQ(out, measure.sample(b));
    EXPECT_EQ(out.ones(), 40u);
  }
}

TEST(DisagreementDistribution, MatchesPairEnumeration) {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 2}, {7, 3}}) {
    const auto support = oracle::weight_k(n, k);
    std::vector<Rational> pmf(n + 1, 0);
    const Rational w = make_rational(1, BigInt(support.size() * support.size()));
    for (const auto& x : support) {
      for (const auto& y : support) pmf[x.hamming_distance(y)] += w;
    }
    const auto d = disagreement_distribution(n, k);
    EXPECT_EQ(d.pmf(), pmf);
    Rational mean = 0;
    for (std::size_t i = 0; i <= n; ++i) mean += pmf[i] * static_cast<long>(i);
    EXPECT_EQ(d.mean(), mean);
    EXPECT_EQ(d.probability_below(Rational(static_cast<long>(n), 4)),
              [&] {
                Rational p = 0;
                for (std::size_t i = 0; 4 * i < n; ++i) p += pmf[i];
                return p;
              }());
  }
}

}  // namespace
}  // namespace kofn
