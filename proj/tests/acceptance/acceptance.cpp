// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: kofn_acceptance [criterion numbers...]; KOFN_WORKERS sets threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kofn/coupling.hpp"
#include "kofn/encoding.hpp"
#include "kofn/osss.hpp"
#include "kofn/percolation.hpp"
#include "kofn/random.hpp"

using namespace kofn;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

unsigned workers() {
  if (const char* w = std::getenv("KOFN_WORKERS")) {
    const int v = std::atoi(w);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

constexpr std::uint64_t kSeed = 20240601;

ParallelOptions stream(std::uint64_t a, std::uint64_t b) {
  return {stream_seed(stream_seed(kSeed, a), b), workers()};
}

// 1. Exact constant search at n in {10, 12}, k = n/2, 200 events x 3 trees.
void osss_constant(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SuiteAtN> suites;
  for (std::size_t n : {10u, 12u}) {
    suites.push_back({n, {n / 2}, generated_event_suite(n, 200, stream_seed(kSeed, n)),
                      generated_tree_suite(n, 3, stream_seed(kSeed, 100 + n))});
  }
  const auto search = search_constant(suites, kDefaultEpsilonGrid, TauVariant::standard, workers());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(search.rows.size() == 2 * 200 * 3, "1200 (event, tree) instances");
  o.require(search.holds_at(20), "lhs <= 20 * bracket for every instance");
  o.require(seconds < 600, "runtime under 10 minutes");
  o.detail << search.rows.size() << " instances, max ratio " << ratio_string(search.global_max)
           << " (" << to_double(search.global_max.value_or(Rational(0))) << "), " << seconds << " s";
}

std::vector<std::pair<IncreasingEvent, DecisionTree>> coupling_suite(std::size_t n) {
  std::vector<std::pair<IncreasingEvent, DecisionTree>> out;
  const auto events = generated_event_suite(n, 20, stream_seed(kSeed, 200 + n));
  const auto trees = generated_tree_suite(n, 3, stream_seed(kSeed, 300 + n));
  for (const auto& a : events) {
    for (const auto& t : trees) out.emplace_back(a, t);
  }
  return out;
}

// 2. Z^(n) has law P_{k,n} and is independent of 1_A(X), exactly.
void coupling_marginal(Outcome& o) {
  std::size_t instances = 0, failures = 0;
  for (std::size_t n : {2u, 4u, 6u}) {
    for (const auto& [a, t] : coupling_suite(n)) {
      const auto r = check_z_marginal(a, t, n, n / 2);
      ++instances;
      if (!r.marginal_exact || !r.independent_of_event) ++failures;
    }
  }
  o.require(failures == 0, "exact marginal and independence on every instance");
  o.detail << failures << " of " << instances << " instances fail";
}

// 3. 2P(A)(1-P(A)) = P(exactly one of X, Z^(n) in A): exact on the suites,
// and by Monte Carlo at n = 20 with 10^6 samples.
void decomposition_identity(Outcome& o) {
  std::size_t instances = 0, failures = 0;
  for (std::size_t n : {2u, 4u, 6u}) {
    for (const auto& [a, t] : coupling_suite(n)) {
      const auto r = check_term_identity(a, t, n, n / 2);
      ++instances;
      if (!r.identity_holds) ++failures;
    }
  }
  o.require(failures == 0, "exact identity on every instance");
  o.detail << failures << " of " << instances << " exact instances fail; n=20 z-scores:";
  Rng rng(stream_seed(kSeed, 401));
  const std::vector<std::pair<IncreasingEvent, DecisionTree>> mc{
      {majority(20, 19), identity_order(20)},
      {tribes(20, 4), random_order(20, stream_seed(kSeed, 400))},
      {random_monotone_dnf(20, rng, "dnf20"),
       balanced_split(20, stream_seed(kSeed, 402))}};
  for (std::size_t i = 0; i < mc.size(); ++i) {
    const auto e = estimate_term_identity(mc[i].first, mc[i].second, 20, 10, 1'000'000, stream(3, i));
    o.require(e.passed(4.0), mc[i].first.name() + " within 4 sigma");
    o.detail << ' ' << mc[i].first.name() << '=' << e.z_score;
  }
}

// 4. Shared-seed joint law against the closed form, TV < 0.01.
void exchange_coupling(Outcome& o) {
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::size_t k = 1; k + 1 <= m; ++k) {
      const auto r = compare_shared_seed(m, k, 1'000'000, stream(4, 10 * m + k));
      ++cases;
      worst = std::max(worst, r.total_variation);
      o.require(r.total_variation < 0.01, "TV < 0.01 at m=" + std::to_string(m) + " k=" + std::to_string(k));
      o.require(r.order_violations == 0 && r.off_support == 0, "Z' >= Z on every draw");
    }
  }
  o.detail << cases << " (m, k) pairs, largest TV " << worst;
}

// 5. The hybrid sum grows like ln n while the bracket stays bounded.
void logn_blowup(Outcome& o) {
  std::vector<double> x, y;
  double worst_bracket = 0.0;
  for (std::size_t n : {16u, 32u, 64u, 128u, 256u, 512u}) {
    const auto est = logn_sum_estimate(n, 100'000, stream(5, n));
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(est.sum.mean);
    const auto event = dictator(n, static_cast<Element>(n - 1));
    const auto tree = identity_order(n);
    const KOutOfN measure(n, n / 2);
    const double bracket = n <= 16 ? to_double(verify_osss_exact(event, tree, measure).bracket)
                                   : verify_osss_mc(event, tree, measure, 2000, stream(6, n)).bracket.mean;
    worst_bracket = std::max(worst_bracket, bracket);
  }
  const auto fit = fit_line(x, y);
  const auto ci = fit.slope_interval(0.95);
  o.require(ci.first > 0, "slope CI excludes 0");
  o.require(fit.r_squared > 0.9, "R^2 > 0.9");
  o.require(worst_bracket <= 2.0, "bracket <= 2 at every n");
  o.detail << "sums";
  for (double s : y) o.detail << ' ' << s;
  o.detail << "; slope " << fit.slope << " CI [" << ci.first << ", " << ci.second << "], R^2 "
           << fit.r_squared << ", largest bracket " << worst_bracket;
}

// 6. P_{k+1}(A) - P_k(A) = E_k[N^0] / (n - k), exactly.
void russo(Outcome& o) {
  std::size_t checks = 0, failures = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (const auto& a : generated_event_suite(n, 10, stream_seed(kSeed, 600 + n))) {
      for (std::size_t k = 0; k < n; ++k) {
        ++checks;
        if (!russo_check(a, k).holds()) ++failures;
      }
    }
  }
  const auto box = crossing_event(build_box(2));
  for (std::size_t k = 0; k < 4; ++k) {
    ++checks;
    if (!russo_check(box, k).holds()) ++failures;
  }
  o.require(failures == 0, "exact identity for every event and k");
  o.detail << failures << " of " << checks << " (event, k) pairs fail, R=2 box included";
}

// 7. Crossing probability 1/2.
void crossing_symmetry(Outcome& o) {
  const Rational p2 = crossing_probability_exact(2, 2);
  o.require(p2 == Rational(1, 2), "exactly 1/2 at R=2");
  o.detail << "R=2: " << p2.get_str();
  for (std::size_t R : {8u, 16u}) {
    const auto e = crossing_probability_mc(R, R * R / 2, 100'000, stream(7, R));
    o.require(e.within(0.5, 3.0), "within 3 sigma at R=" + std::to_string(R));
    o.detail << "; R=" << R << ": " << e.mean << " (z " << e.z_score(0.5) << ")";
  }
}

// 8. Every exploration tree decides A_R as the union-find oracle does.
void exploration(Outcome& o) {
  const auto small = exploration_agreement(2, 2, 0, stream(8, 2));
  o.require(small.exhaustive && small.configurations == 6, "all 6 configurations at R=2");
  o.require(small.passed(), "agreement at R=2");
  o.detail << "R=2: " << small.configurations << " configurations";
  for (std::size_t R : {4u, 8u, 16u, 32u}) {
    const auto r = exploration_agreement(R, R * R / 2, 100'000, stream(8, R));
    o.require(r.configurations == 100'000, "10^5 configurations at R=" + std::to_string(R));
    o.require(r.passed(), "agreement at R=" + std::to_string(R));
    o.detail << "; R=" << R << ": " << r.tree_mismatches << " tree / " << r.walk_mismatches
             << " walk mismatches over " << r.configurations << " x " << r.anchors << " anchors";
  }
}

// 9. E[N^0_R] grows polynomially.
void pivotal_growth(Outcome& o) {
  const auto s = pivotal_scaling_experiment({8, 16, 32, 64}, 100'000, stream(9, 0));
  o.require(s.strictly_increasing, "strictly increasing");
  o.require(std::all_of(s.separations.begin(), s.separations.end(), [](double z) { return z >= 3.0; }),
            "consecutive 3 sigma separation");
  o.require(s.slope_ci.first > 0, "slope CI excludes 0");
  o.detail << "means";
  for (const auto& r : s.rows) o.detail << ' ' << r.pivotals.mean;
  o.detail << "; slope " << s.fit.slope << " CI [" << s.slope_ci.first << ", " << s.slope_ci.second << "]";
}

// 10. Averaged revealment decays and the anchor-averaged inequality holds.
void revealment_decay(Outcome& o) {
  double previous = 2.0;
  o.detail << "max averaged revealment";
  for (std::size_t R : {8u, 16u, 32u}) {
    const auto p = revealment_profile(R, 2000, stream(10, R));
    o.require(p.max_averaged < previous, "strictly decreasing at R=" + std::to_string(R));
    o.require(p.decision_mismatches == 0, "tree decisions at R=" + std::to_string(R));
    previous = p.max_averaged;
    o.detail << ' ' << p.max_averaged;
  }
  const auto exact = osss_averaged_bound_check_exact(2, 20);
  o.require(exact.holds_every_anchor && exact.holds_averaged, "exact C=20 bound at R=2");
  o.detail << "; averaged ratio R=2 " << exact.averaged_ratio;
  for (std::size_t R : {8u, 16u}) {
    const auto c = osss_averaged_bound_check(R, 2000, stream(11, R), 20.0, 4.0, 20);
    o.require(c.holds_every_anchor && c.holds_averaged, "C=20 within 4 sigma at R=" + std::to_string(R));
    o.detail << ", R=" << R << ' ' << c.averaged_ratio;
  }
}

// 11. Fixed-k one-arm probability at most twice the Bernoulli one.
void one_arm(Outcome& o) {
  for (std::size_t M : {2u, 4u, 8u, 16u}) {
    const auto e = one_arm_estimate(M, 100'000, stream(12, M));
    o.require(e.within_bound(4.0), "fixed-k <= 2 Bernoulli + 4 sigma at M=" + std::to_string(M));
    o.detail << "M=" << M << ": " << e.fixed_k.mean << " vs " << e.bernoulli.mean << "; ";
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "osss constant 20 (exact, n=10,12)", osss_constant},
      {2, "coupling marginal (exact)", coupling_marginal},
      {3, "decomposition identity (exact and n=20 Monte Carlo)", decomposition_identity},
      {4, "exchange coupling total variation", exchange_coupling},
      {5, "log n growth with bounded bracket", logn_blowup},
      {6, "russo identity (exact)", russo},
      {7, "crossing symmetry", crossing_symmetry},
      {8, "exploration matches the oracle", exploration},
      {9, "pivotal growth", pivotal_growth},
      {10, "averaged revealment decay and averaged osss", revealment_decay},
      {11, "fixed-k one-arm at most twice bernoulli", one_arm},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "exception: " << e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " | "
              << o.detail.str() << " [" << seconds << " s]" << std::endl;
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
