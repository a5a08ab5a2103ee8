#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/events.hpp"
#include "kofn/measures.hpp"
#include "kofn/osss.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"
#include "kofn/trees.hpp"

namespace kofn {

// Axial offsets of the six triangular-lattice neighbours, in rotation order
// (each is the previous one turned by +60 degrees under x + y e^{i pi/3}).
inline constexpr std::array<std::array<int, 2>, 6> kHexDirections{
    {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

// The R x R rhombus {x + y e^{i pi/3} : 0 <= x, y <= R-1}; vertex (x, y)
// has index x + y R. Occupied = white, vacant = black.
class TriangularBox {
 public:
  explicit TriangularBox(std::size_t R);

  std::size_t side() const noexcept { return R_; }
  std::size_t size() const noexcept { return R_ * R_; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  Element index(int x, int y) const { return static_cast<Element>(x + y * static_cast<int>(R_)); }
  int x_of(Element v) const noexcept { return static_cast<int>(v % R_); }
  int y_of(Element v) const noexcept { return static_cast<int>(v / R_); }
  bool inside(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < static_cast<int>(R_) && y < static_cast<int>(R_);
  }

  std::span<const Element> neighbors(Element v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool on_left(Element v) const noexcept { return x_of(v) == 0; }
  bool on_right(Element v) const noexcept { return x_of(v) == static_cast<int>(R_) - 1; }
  bool on_bottom(Element v) const noexcept { return y_of(v) == 0; }
  bool on_top(Element v) const noexcept { return y_of(v) == static_cast<int>(R_) - 1; }

 private:
  std::size_t R_;
  std::vector<std::size_t> offsets_;
  std::vector<Element> adjacency_;
};

TriangularBox build_box(std::size_t R);

// Occupied left-right crossing, by union-find (the reference oracle).
bool has_horizontal_crossing(const TriangularBox& box, const Configuration& omega);
// Vacant top-bottom crossing.
bool has_vacant_vertical_crossing(const TriangularBox& box, const Configuration& omega);

// A_R with an incremental tracker: determined once the revealed occupied
// sites cross left-right or the revealed vacant sites cross top-bottom.
IncreasingEvent crossing_event(const TriangularBox& box);

// --- Exploration trees ---------------------------------------------------------
//
// Anchor j in [0, R) names v0 = (R-1, j). Two interface walks run on the box
// framed by a ring of virtual sites: the first decides whether an occupied
// path joins the left side to {(R-1, y) : y >= j}; if not and j >= 1, the
// second decides the same for {(R-1, y) : y <= j}. Sites already seen are not
// queried again. Should more information be requested after both walks, the
// tree queries the lowest unrevealed index.

DecisionTree exploration_tree(const TriangularBox& box, std::size_t anchor);

struct ExplorationResult {
  bool upper = false;                  // occupied path from the left to y >= j
  std::optional<bool> lower;           // ... to y <= j (second walk, if run)
  bool decision = false;               // upper || lower
  std::vector<Element> revealed;       // in query order
  std::size_t steps = 0;               // walker moves, virtual sites included
};

// Runs the two walks against omega, without the crossing tracker.
ExplorationResult explore(const TriangularBox& box, std::size_t anchor,
                          const Configuration& omega);

// Occupied path from the left side to the right-column sites with
// y in [lo, hi] (reference for the individual walks).
bool left_connects_to_right_segment(const TriangularBox& box, const Configuration& omega,
                                    int lo, int hi);

// --- Pivotality ---------------------------------------------------------------

// Number of 0-pivotal sites for A_R: one cluster labelling, then per vacant
// site a merge test over its occupied neighbour clusters.
std::size_t count_zero_pivotal(const TriangularBox& box, const Configuration& omega);
// Per-site 0-pivotal flags (same method).
void zero_pivotal_flags(const TriangularBox& box, const Configuration& omega,
                        std::vector<std::uint8_t>& flags);
// Flip each vacant site and rerun the oracle.
std::size_t count_zero_pivotal_naive(const TriangularBox& box, const Configuration& omega);

// For vacant v: the occupied neighbour clusters reach the left and right
// sides and the vacant neighbour clusters of omega without v reach the top
// and bottom (a side v itself lies on counts as reached).
bool four_arm_witness(const TriangularBox& box, const Configuration& omega, Element v);

// --- Russo analogue --------------------------------------------------------------

struct RussoReport {
  std::string event;
  std::size_t n = 0;
  std::size_t k = 0;
  Rational lhs;               // P_{k+1,n}(A) - P_{k,n}(A)
  Rational expected_pivotals; // E_{k,n}[N^0]
  Rational rhs;               // E_{k,n}[N^0] / (n - k)
  bool holds() const { return lhs == rhs; }
};

// Throws DomainError for k = n.
RussoReport russo_check(const IncreasingEvent& event, std::size_t k,
                        std::uint64_t cap = kDefaultEnumerationCap);

// --- Crossing probabilities and derivatives ------------------------------------

Rational crossing_probability_exact(std::size_t R, std::size_t k,
                                    std::uint64_t cap = 1'000'000);
Estimate crossing_probability_mc(std::size_t R, std::size_t k, std::size_t samples,
                                 const ParallelOptions& parallel);

// E[N^0_R] under P_{k,R^2}.
Estimate expected_pivotals_mc(std::size_t R, std::size_t k, std::size_t samples,
                              const ParallelOptions& parallel);
Rational expected_pivotals_exact(std::size_t R, std::size_t k, std::uint64_t cap = 1'000'000);

// (P_{k+1}(A_R) - P_k(A_R)) R^2 at k = R^2/2 through the Russo analogue:
// 2 E[N^0]. Throws DomainError for odd R.
Estimate discrete_derivative(std::size_t R, std::size_t samples, const ParallelOptions& parallel);
// The same quantity from two independent crossing-probability runs.
Estimate discrete_derivative_direct(std::size_t R, std::size_t samples,
                                    const ParallelOptions& parallel);
Rational discrete_derivative_exact(std::size_t R);

// --- Scaling experiments ---------------------------------------------------------

struct PivotalRow {
  std::size_t R = 0;
  std::size_t k = 0;
  Estimate pivotals;
  std::uint64_t seed = 0;  // root seed of this row's run
};

struct PivotalScaling {
  std::vector<PivotalRow> rows;
  LinearFit fit;                         // log E[N^0] against log R
  std::pair<double, double> slope_ci{};  // 95%
  std::vector<double> separations;       // z of consecutive differences
  bool strictly_increasing = false;
};

PivotalScaling pivotal_scaling_experiment(const std::vector<std::size_t>& radii,
                                          std::size_t samples, const ParallelOptions& parallel);

struct RevealmentProfile {
  std::size_t R = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> anchors;
  std::vector<std::vector<double>> per_anchor;  // [anchor][site]
  std::vector<Estimate> averaged;               // per site, mean over anchors
  double max_averaged = 0.0;
  Element argmax = 0;
  double argmax_std_error = 0.0;
  std::size_t decision_mismatches = 0;  // tree decision vs oracle
};

// Uses the same configurations for every anchor. `anchors` empty = all R.
RevealmentProfile revealment_profile(std::size_t R, std::size_t samples,
                                     const ParallelOptions& parallel,
                                     std::vector<std::size_t> anchors = {});

struct AgreementReport {
  std::size_t R = 0;
  std::size_t configurations = 0;
  std::size_t anchors = 0;
  std::size_t tree_mismatches = 0;     // run_tree decision vs oracle
  std::size_t walk_mismatches = 0;     // explore() answers vs segment oracles
  std::size_t duality_failures = 0;    // crossing XOR vacant crossing
  std::size_t fallbacks = 0;           // transcripts that left the walks
  bool exhaustive = false;
  bool passed() const {
    return tree_mismatches == 0 && walk_mismatches == 0 && duality_failures == 0 && fallbacks == 0;
  }
};

// Exhaustive over Omega_{k,R^2} when `samples` is 0, otherwise sampled.
AgreementReport exploration_agreement(std::size_t R, std::size_t k, std::size_t samples,
                                      const ParallelOptions& parallel);

struct OneArmEstimate {
  std::size_t M = 0;
  std::size_t n = 0;      // (2M+1)^2 sites
  std::size_t k = 0;      // ceil(n/2)
  Estimate bernoulli;
  Estimate fixed_k;
  // fixed_k <= 2 bernoulli + sigmas * combined error.
  bool within_bound(double sigmas = 4.0) const;
};

// Origin occupied and joined by an occupied path, inside the hexagon of
// graph radius M, to a site at graph distance M.
bool one_arm_event(std::size_t M, const Configuration& omega);
OneArmEstimate one_arm_estimate(std::size_t M, std::size_t samples,
                                const ParallelOptions& parallel);
// Exact values for small M by enumeration of the rhombus (M = 1 only has
// 9 sites); returns {Bernoulli(1/2), fixed-k}.
std::pair<Rational, Rational> one_arm_exact(std::size_t M);

struct AveragedOsssCheck {
  std::size_t R = 0;
  std::size_t samples = 0;
  bool exact = false;
  std::vector<std::size_t> anchors;
  std::vector<OsssEstimate> per_anchor;         // Monte Carlo mode
  std::vector<OsssReport> per_anchor_exact;     // exact mode
  double lhs = 0.25;
  double averaged_bracket = 0.0;
  double averaged_ratio = 0.0;
  double averaged_ratio_std_error = 0.0;
  bool holds_every_anchor = false;  // C = constant, within `sigmas`
  bool holds_averaged = false;
};

AveragedOsssCheck osss_averaged_bound_check(std::size_t R, std::size_t samples,
                                            const ParallelOptions& parallel,
                                            double constant = 20.0, double sigmas = 4.0,
                                            std::size_t batches = 20);
AveragedOsssCheck osss_averaged_bound_check_exact(std::size_t R, const Rational& constant = 20);

}  // namespace kofn
