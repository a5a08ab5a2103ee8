#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "kofn/errors.hpp"
#include "kofn/percolation.hpp"
#include "kofn/pivotality.hpp"
#include "oracles.hpp"

namespace kofn {
namespace {

// Breadth-first search over sites of one colour from `sources` to `targets`,
// with neighbours recomputed from the axial offsets.
bool bfs_connects(std::size_t R, const Configuration& omega, bool colour,
                  bool (*source)(int, int, int), bool (*target)(int, int, int)) {
  const int r = static_cast<int>(R);
  std::vector<std::uint8_t> seen(R * R, 0);
  std::deque<std::pair<int, int>> queue;
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      if (omega[x + y * r] == colour && source(x, y, r)) {
        seen[x + y * r] = 1;
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    if (target(x, y, r)) return true;
    for (const auto& d : kHexDirections) {
      const int nx = x + d[0], ny = y + d[1];
      if (nx < 0 || ny < 0 || nx >= r || ny >= r) continue;
      const int i = nx + ny * r;
      if (seen[i] || omega[i] != colour) continue;
      seen[i] = 1;
      queue.emplace_back(nx, ny);
    }
  }
  return false;
}

bool left(int x, int, int) { return x == 0; }
bool right(int x, int, int r) { return x == r - 1; }
bool bottom(int, int y, int) { return y == 0; }
bool top(int, int y, int r) { return y == r - 1; }

bool bfs_crossing(std::size_t R, const Configuration& omega) {
  return bfs_connects(R, omega, true, left, right);
}

TEST(Box, AdjacencyIsTheTriangularLattice) {
  for (std::size_t R : {1u, 2u, 3u, 5u}) {
    const auto box = build_box(R);
    EXPECT_EQ(box.size(), R * R);
    EXPECT_EQ(box.edge_count(), 3 * R * R - 4 * R + 1);
    for (Element v = 0; v < box.size(); ++v) {
      std::set<Element> want;
      for (const auto& d : kHexDirections) {
        const int x = box.x_of(v) + d[0], y = box.y_of(v) + d[1];
        if (box.inside(x, y)) want.insert(box.index(x, y));
      }
      const auto got = box.neighbors(v);
      EXPECT_EQ(std::set<Element>(got.begin(), got.end()), want);
    }
  }
  EXPECT_EQ(build_box(3).index(2, 1), 5u);
}

TEST(Box, CrossingOraclesMatchBfsAndDuality) {
  for (std::size_t R : {2u, 3u, 4u}) {
    const auto box = build_box(R);
    const auto event = crossing_event(box);
    for (const auto& omega : oracle::all_configurations(R * R)) {
      const bool cross = has_horizontal_crossing(box, omega);
      ASSERT_EQ(cross, bfs_crossing(R, omega));
      ASSERT_EQ(event.contains(omega), cross);
      ASSERT_EQ(has_vacant_vertical_crossing(box, omega), bfs_connects(R, omega, false, bottom, top));
      ASSERT_NE(cross, has_vacant_vertical_crossing(box, omega)) << omega.to_string();
    }
    EXPECT_FALSE(check_monotone_exhaustive(event).has_value());
  }
}

TEST(Box, CrossingTrackerMatchesCompletionEnumeration) {
  const auto box = build_box(3);
  const auto event = crossing_event(box);
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const auto omega = oracle::from_mask(9, rng() & 511U);
    std::vector<Element> order(9);
    std::iota(order.begin(), order.end(), Element{0});
    std::shuffle(order.begin(), order.end(), rng);
    auto tracker = event.make_tracker();
    std::vector<std::uint8_t> revealed(9, 0);
    for (Element e : order) {
      tracker->reveal(e, omega[e]);
      revealed[e] = 1;
      ASSERT_EQ(tracker->decided(), oracle::determined(event, omega, revealed, TauVariant::standard));
    }
  }
}

TEST(Box, CrossingProbabilityBySymmetry) {
  EXPECT_EQ(crossing_probability_exact(2, 2), Rational(1, 2));
  EXPECT_EQ(crossing_probability_exact(4, 8), Rational(1, 2));
  // At R=2 with one occupied site nothing crosses; with three, always.
  EXPECT_EQ(crossing_probability_exact(2, 1), 0);
  EXPECT_EQ(crossing_probability_exact(2, 3), 1);
  const auto mc = crossing_probability_mc(8, 32, 20000, ParallelOptions{1, 2});
  EXPECT_TRUE(mc.within(0.5, 4.0));
}

TEST(Exploration, ExhaustiveAgreementOnSmallBoxes) {
  for (std::size_t R : {1u, 2u, 3u}) {
    for (std::size_t k = 0; k <= R * R; ++k) {
      const auto r = exploration_agreement(R, k, 0, ParallelOptions{});
      EXPECT_TRUE(r.exhaustive);
      EXPECT_TRUE(r.passed()) << "R=" << R << " k=" << k;
      EXPECT_EQ(r.anchors, R);
    }
  }
}

TEST(Exploration, TreeDecisionsMatchTheOracleAt4) {
  const auto box = build_box(4);
  const auto event = crossing_event(box);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto tree = exploration_tree(box, j);
    for (const auto& omega : oracle::all_configurations(16)) {
      const auto t = run_tree(tree, event, omega);
      ASSERT_EQ(t.decision, bfs_crossing(4, omega));
      const auto walk = explore(box, j, omega);
      ASSERT_EQ(walk.decision, t.decision);
      ASSERT_EQ(walk.upper, box.side() > 0 && left_connects_to_right_segment(box, omega, static_cast<int>(j), 3));
      std::set<Element> distinct(walk.revealed.begin(), walk.revealed.end());
      ASSERT_EQ(distinct.size(), walk.revealed.size());
    }
  }
}

TEST(Exploration, SampledAgreementAndAnchors) {
  const auto r = exploration_agreement(12, 72, 300, ParallelOptions{3, 2});
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(r.exhaustive);
  const auto box = build_box(4);
  EXPECT_THROW(exploration_tree(box, 4), DomainError);
  EXPECT_THROW(explore(box, 0, Configuration(15)), DimensionError);
  EXPECT_EQ(exploration_tree(box, 1).name(), "exploration(R=4,v0=(3,1))");
}

TEST(Pivotals, FastNaiveAndFourArmAgree) {
  for (std::size_t R : {2u, 3u, 7u}) {
    const auto box = build_box(R);
    const auto event = crossing_event(box);
    KOutOfN measure(R * R, R * R / 2);
    Rng rng(R);
    std::vector<std::uint8_t> flags;
    for (int trial = 0; trial < 300; ++trial) {
      const auto omega = measure.sample(rng);
      const auto fast = count_zero_pivotal(box, omega);
      EXPECT_EQ(fast, count_zero_pivotal_naive(box, omega));
      EXPECT_EQ(fast, count_zero_pivotals(event, omega));
      zero_pivotal_flags(box, omega, flags);
      for (Element v = 0; v < box.size(); ++v) {
        EXPECT_EQ(flags[v] != 0, is_zero_pivotal(event, omega, v));
        EXPECT_EQ(flags[v] != 0, four_arm_witness(box, omega, v)) << omega.to_string() << " " << v;
      }
    }
  }
}

TEST(Russo, IdentityOnBoxesAndEvents) {
  for (std::size_t R : {2u, 3u}) {
    const auto event = crossing_event(build_box(R));
    for (std::size_t k = 0; k < R * R; ++k) EXPECT_TRUE(russo_check(event, k).holds());
  }
  for (const auto& a : generated_event_suite(7, 6, 3)) {
    for (std::size_t k = 0; k < 7; ++k) {
      const auto r = russo_check(a, k);
      EXPECT_EQ(r.lhs, oracle::probability(a, k + 1) - oracle::probability(a, k));
      EXPECT_TRUE(r.holds());
    }
  }
  EXPECT_THROW(russo_check(majority(4), 4), DomainError);
}

TEST(Russo, DerivativeFormsAgree) {
  EXPECT_EQ(discrete_derivative_exact(2), 2);
  const Rational exact4 = discrete_derivative_exact(4);
  const auto russo = discrete_derivative(4, 20000, ParallelOptions{1, 2});
  const auto direct = discrete_derivative_direct(4, 20000, ParallelOptions{1, 2});
  EXPECT_TRUE(russo.within(to_double(exact4), 4.0));
  EXPECT_TRUE(direct.within(to_double(exact4), 4.0));
  EXPECT_THROW(discrete_derivative(3, 10, ParallelOptions{}), DomainError);
}

TEST(Scaling, PivotalsGrowAndRevealmentIsBounded) {
  const auto s = pivotal_scaling_experiment({4, 8, 16}, 3000, ParallelOptions{1, 2});
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_TRUE(s.strictly_increasing);
  EXPECT_GT(s.fit.slope, 0.0);
  const auto p = revealment_profile(8, 300, ParallelOptions{1, 2});
  EXPECT_EQ(p.anchors.size(), 8u);
  EXPECT_EQ(p.decision_mismatches, 0u);
  EXPECT_LE(p.max_averaged, 1.0);
  EXPECT_GT(p.max_averaged, 0.0);
  for (const auto& row : p.per_anchor) {
    for (double d : row) EXPECT_LE(d, 1.0);
  }
}

TEST(OneArm, ExactValuesAtRadiusOne) {
  const auto [bern, fixed] = one_arm_exact(1);
  EXPECT_EQ(bern, Rational(63, 128));
  EXPECT_EQ(fixed, Rational(5, 9));
  const auto e = one_arm_estimate(1, 40000, ParallelOptions{2, 2});
  EXPECT_TRUE(e.bernoulli.within(to_double(bern), 4.0));
  EXPECT_TRUE(e.fixed_k.within(to_double(fixed), 4.0));
  EXPECT_TRUE(e.within_bound());
  EXPECT_EQ(e.n, 9u);
  EXPECT_EQ(e.k, 5u);
}

TEST(OneArm, EventDefinitionOnRadiusOne) {
  // Sites of the 3 x 3 rhombus around the origin, index (x+1) + 3(y+1).
  Configuration omega(9);
  EXPECT_FALSE(one_arm_event(1, omega));
  omega.set(4, true);  // origin only: no neighbour at distance 1 occupied
  EXPECT_FALSE(one_arm_event(1, omega));
  omega.set(5, true);  // (1, 0)
  EXPECT_TRUE(one_arm_event(1, omega));
  Configuration corner(9);
  corner.set(4, true);
  corner.set(8, true);  // (1, 1) is at distance 2, outside the hexagon
  EXPECT_FALSE(one_arm_event(1, corner));
}

TEST(AveragedOsss, ExactAtRadiusTwo) {
  const auto c = osss_averaged_bound_check_exact(2);
  EXPECT_TRUE(c.exact);
  EXPECT_EQ(c.per_anchor_exact.size(), 2u);
  EXPECT_TRUE(c.holds_every_anchor);
  EXPECT_TRUE(c.holds_averaged);
  EXPECT_DOUBLE_EQ(c.lhs, 0.25);
}

}  // namespace
}  // namespace kofn
