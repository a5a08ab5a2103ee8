#include <gtest/gtest.h>

#include "kofn/pivotality.hpp"
#include "oracles.hpp"

namespace kofn {
namespace {

TEST(Pivotality, DefinitionsOnASmallExample) {
  const auto a = IncreasingEvent::from_minterms("dnf", 4, {{0, 1}, {2}});
  const auto omega = Configuration::from_string("1000");
  EXPECT_TRUE(is_zero_pivotal(a, omega, 1));
  EXPECT_TRUE(is_zero_pivotal(a, omega, 2));
  EXPECT_FALSE(is_zero_pivotal(a, omega, 3));
  EXPECT_TRUE(is_pivotal(a, omega, 1));
  EXPECT_EQ(count_zero_pivotals(a, omega), 2u);
  EXPECT_TRUE(is_pivotal_pair(a, omega, 0, 2));   // 0010 is in A
  EXPECT_FALSE(is_pivotal_pair(a, omega, 0, 3));  // 0001 is not, neither is 1000
}

TEST(Pivotality, ExactInfluencesMatchBruteForce) {
  for (std::size_t n : {4u, 6u, 7u}) {
    const auto suite = generated_event_suite(n, 12, 17 + n);
    for (const auto& a : suite) {
      for (std::size_t k = 0; k <= n; ++k) {
        KOutOfN measure(n, k);
        const auto all = influences_exact(a, measure);
        EXPECT_EQ(probability_exact(a, measure), oracle::probability(a, k));
        for (Element e = 0; e < n; ++e) {
          const auto expected = oracle::influence(a, k, e);
          EXPECT_EQ(all[e], expected) << a.name() << " k=" << k << " e=" << e;
          EXPECT_EQ(influence_exact(a, measure, e), expected);
        }
      }
    }
  }
}

TEST(Pivotality, MajorityInfluenceClosedForm) {
  // 0-pivotal for majority of 5 at k=2: the other four hold exactly two ones
  // and e is one of the three zeros: 3/5 of configurations have e = 0 and
  // then it is always pivotal.
  KOutOfN measure(5, 2);
  const auto inf = influences_exact(majority(5), measure);
  for (const auto& v : inf) EXPECT_EQ(v, Rational(3, 5));
}

TEST(Pivotality, MonteCarloWithinFourSigma) {
  const auto a = tribes(12, 3);
  KOutOfN measure(12, 6);
  const auto exact = influences_exact(a, measure);
  const auto mc = influences_mc(a, measure, 40000, ParallelOptions{5, 3});
  for (Element e = 0; e < 12; ++e) {
    EXPECT_TRUE(mc.values[e].within(to_double(exact[e]), 4.0)) << e;
  }
  EXPECT_TRUE(probability_mc(a, measure, 40000, ParallelOptions{6, 2})
                  .within(to_double(probability_exact(a, measure)), 4.0));
  Rng rng(1);
  EXPECT_TRUE(influence_mc(a, measure, 0, 20000, rng).within(to_double(exact[0]), 4.0));
}

TEST(Pivotality, MonteCarloIsDeterministicPerSeedAndWorkers) {
  const auto a = majority(9);
  KOutOfN measure(9, 4);
  const auto x = influences_mc(a, measure, 5000, ParallelOptions{42, 4});
  const auto y = influences_mc(a, measure, 5000, ParallelOptions{42, 4});
  for (Element e = 0; e < 9; ++e) EXPECT_EQ(x.values[e].mean, y.values[e].mean);
}

}  // namespace
}  // namespace kofn
