#include <gtest/gtest.h>

#include <map>

#include "kofn/coupling.hpp"
#include "kofn/errors.hpp"
#include "oracles.hpp"

namespace kofn {
namespace {

TEST(Coupling, DisagreementPointsByType) {
  const auto x = Configuration::from_string("1100");
  const auto y = Configuration::from_string("0101");
  const auto d = disagreement_points(x, y);
  EXPECT_EQ(d.one_zero, std::vector<Element>{0});
  EXPECT_EQ(d.zero_one, std::vector<Element>{3});
  EXPECT_EQ(d.distance(), 2u);
  EXPECT_THROW(disagreement_points(x, Configuration::from_string("0111")), DomainError);
  EXPECT_THROW(disagreement_points(x, Configuration(3)), DimensionError);
}

TEST(Coupling, AllMatchingsCountAndValidity) {
  const auto x = Configuration::from_string("111000");
  const auto y = Configuration::from_string("000111");
  const auto all = all_matchings(x, y);
  EXPECT_EQ(all.size(), 6u);  // 3!
  for (const auto& m : all) EXPECT_TRUE(m.valid_for(x, y));
  EXPECT_FALSE(Matching::identity(6).valid_for(x, y));
  EXPECT_TRUE(Matching::identity(6).valid_for(x, x));
}

TEST(Coupling, UniformMatchingIsUniform) {
  const auto x = Configuration::from_string("111000");
  const auto y = Configuration::from_string("000111");
  const auto all = all_matchings(x, y);
  Rng rng(12);
  std::map<std::vector<Element>, double> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const auto m = uniform_matching(x, y, rng);
    ASSERT_TRUE(m.valid_for(x, y));
    counts[m.map()] += 1;
  }
  std::vector<double> observed, expected;
  for (const auto& m : all) {
    observed.push_back(counts[m.map()]);
    expected.push_back(draws / 6.0);
  }
  EXPECT_LT(chi_square_statistic(observed, expected), chi_square_critical(5, 0.001));
}

TEST(Coupling, ZSequenceStructure) {
  const std::size_t n = 6;
  const auto events = generated_event_suite(n, 6, 3);
  const auto trees = generated_tree_suite(n, 3, 4);
  const auto support = oracle::weight_k(n, 3);
  Rng rng(5);
  for (const auto& a : events) {
    for (const auto& t : trees) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto& x = support[rng() % support.size()];
        const auto& y = support[rng() % support.size()];
        const auto sigma = uniform_matching(x, y, rng);
        const auto z = build_z_sequence(x, y, sigma, t, a);
        ASSERT_EQ(z.states.size(), n + 1);
        EXPECT_EQ(z.states.front(), x);
        EXPECT_TRUE(check_z_structure(x, y, sigma, z));
        for (const auto& s : z.states) EXPECT_EQ(s.ones(), 3u);
      }
    }
  }
}

// P(Z^(n) = omega) by summing over (X, Y, sigma) directly.
std::vector<Rational> brute_marginal(const IncreasingEvent& a, const DecisionTree& t,
                                     std::size_t n, std::size_t k) {
  const auto support = oracle::weight_k(n, k);
  std::map<Configuration, Rational> mass;
  const Rational pair = make_rational(1, BigInt(support.size() * support.size()));
  for (const auto& x : support) {
    for (const auto& y : support) {
      const auto matchings = all_matchings(x, y);
      const Rational w = pair / static_cast<long>(matchings.size());
      for (const auto& m : matchings) mass[build_z_sequence(x, y, m, t, a).states.back()] += w;
    }
  }
  std::vector<Rational> out;
  for (const auto& c : support) out.push_back(mass[c]);
  return out;
}

TEST(Coupling, ExactMarginalMatchesBruteForceAndUniform) {
  for (std::size_t n : {2u, 4u}) {
    for (const auto& a : generated_event_suite(n, 5, 40 + n)) {
      for (const auto& t : generated_tree_suite(n, 3, 50 + n)) {
        const auto r = check_z_marginal(a, t, n, n / 2);
        EXPECT_EQ(r.support, oracle::weight_k(n, n / 2));
        EXPECT_EQ(r.marginal, brute_marginal(a, t, n, n / 2));
        EXPECT_TRUE(r.passed()) << a.name() << " " << t.name();
      }
    }
  }
}

TEST(Coupling, TermIdentityAndClaimOnSuites) {
  const std::size_t n = 6;
  for (const auto& a : generated_event_suite(n, 4, 60)) {
    for (const auto& t : generated_tree_suite(n, 2, 61)) {
      const auto r = check_term_identity(a, t, n, 3);
      EXPECT_TRUE(r.passed()) << a.name() << " " << t.name();
      EXPECT_EQ(r.lhs, 2 * r.p_event * (1 - r.p_event));
      EXPECT_EQ(r.term1 + r.term2, r.rhs);
      for (std::size_t step : {1u, 3u}) {
        EXPECT_TRUE(check_claim_distributional_equality(a, t, n, 3, step).passed());
      }
    }
  }
}

TEST(Coupling, ExactChecksRefuseLargeN) {
  EXPECT_THROW(check_z_marginal(majority(9), identity_order(9), 9, 4), ResourceError);
}

TEST(Coupling, MonteCarloTermIdentity) {
  const auto a = majority(11);
  const auto t = random_order(11, 3);
  const auto e = estimate_term_identity(a, t, 11, 5, 40000, ParallelOptions{9, 2});
  EXPECT_TRUE(e.reference_exact);
  EXPECT_TRUE(e.passed());
  EXPECT_TRUE(e.paired_difference.within(0.0, 4.0));
}

TEST(Coupling, CorrelationRowsAreConsistent) {
  const auto rows = negative_correlation_search(generated_event_suite(6, 5, 70));
  EXPECT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_GE(r.joint, 0);
    EXPECT_LE(r.joint, 1);
  }
}

}  // namespace
}  // namespace kofn
