#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/events.hpp"
#include "kofn/measures.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"
#include "kofn/trees.hpp"

namespace kofn {

// Disagreement points of (x, y) split by type: (x_e, y_e) = (1,0) or (0,1).
// Both lists are increasing and have equal length when |x| = |y|.
struct DisagreementPoints {
  std::vector<Element> one_zero;
  std::vector<Element> zero_one;
  std::size_t distance() const noexcept { return one_zero.size() + zero_one.size(); }
};

// Throws DimensionError on a length mismatch, DomainError on |x| != |y|.
DisagreementPoints disagreement_points(const Configuration& x, const Configuration& y);

// An involution sigma on {0..n-1} pairing each (1,0)-type point with a
// (0,1)-type point; agreement points (singletons) are fixed.
class Matching {
 public:
  Matching() = default;
  // partner[i] is the (0,1)-type point matched to points.one_zero[i].
  Matching(std::size_t n, const DisagreementPoints& points, std::span<const Element> partner);

  static Matching identity(std::size_t n);

  Element operator()(Element e) const { return map_.at(e); }
  const std::vector<Element>& map() const noexcept { return map_; }
  std::size_t size() const noexcept { return map_.size(); }

  // sigma(sigma(e)) = e, types alternate on disagreement points and sigma is
  // the identity exactly on agreement points.
  bool valid_for(const Configuration& x, const Configuration& y) const;

  bool operator==(const Matching&) const = default;

 private:
  std::vector<Element> map_;
};

// Uniform over the (d/2)! bijections: a uniform permutation of the (0,1)
// list is matched against the (1,0) list in order.
Matching uniform_matching(const Configuration& x, const Configuration& y, Rng& rng);

// Every matching for (x, y), in lexicographic order of the partner lists.
std::vector<Matching> all_matchings(const Configuration& x, const Configuration& y);

struct ZSequence {
  std::vector<Configuration> states;  // Z^(0), ..., Z^(n)
  Transcript transcript;              // T run on X
};

// Z^(0) = X; for j <= tau, Z^(j) takes Y's values at e_j and sigma(e_j);
// constant after tau. Throws DomainError for an invalid matching.
ZSequence build_z_sequence(const Configuration& x, const Configuration& y,
                           const Matching& sigma, const DecisionTree& tree,
                           const IncreasingEvent& event,
                           TauVariant variant = TauVariant::standard);

// Coordinatewise recomputation: for j <= tau, Z^(j) equals Y on
// e_[j] and sigma(e_[j]) and X elsewhere; every state has weight |X|;
// Z^(j) = Z^(tau) for j >= tau.
bool check_z_structure(const Configuration& x, const Configuration& y, const Matching& sigma,
                       const ZSequence& z);

// Default limit on n for the matching-summed exact checks.
inline constexpr std::size_t kCouplingExactMaxN = 6;

struct ZMarginalReport {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Configuration> support;  // Omega_{k,n} in enumeration order
  std::vector<Rational> marginal;      // P(Z^(n) = omega)
  std::vector<Rational> joint_in_a;    // P(X in A, Z^(n) = omega)
  Rational p_event;
  bool marginal_exact = false;         // marginal == P_{k,n}
  bool independent_of_event = false;   // Z^(n) independent of 1_A(X)
  bool independent_of_transcript = false;  // ... and of X on e_[tau]
  std::size_t weighted_terms = 0;
  bool passed() const { return marginal_exact && independent_of_event && independent_of_transcript; }
};

ZMarginalReport check_z_marginal(const IncreasingEvent& event, const DecisionTree& tree,
                                 std::size_t n, std::size_t k,
                                 TauVariant variant = TauVariant::standard,
                                 std::size_t max_n = kCouplingExactMaxN);

struct TermIdentityReport {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  Rational c1;
  Rational p_event;
  Rational lhs;            // 2 P(A)(1 - P(A))
  Rational rhs;            // P(exactly one of X, Z^(n) in A)
  Rational term1;          // ... and d(X,Y) < c1 n
  Rational term2;          // ... and d(X,Y) >= c1 n
  Rational term1_via_y;    // P(exactly one of X, Y in A, d(X,Y) < c1 n)
  Rational term1_bound;    // 4 P(A)(1-P(A)) P(d(X,Y) < c1 n)
  bool identity_holds = false;   // lhs == rhs == term1 + term2
  bool term1_matches = false;    // term1 == term1_via_y
  bool term1_bounded = false;    // term1 <= term1_bound
  bool passed() const { return identity_holds && term1_matches && term1_bounded; }
};

TermIdentityReport check_term_identity(const IncreasingEvent& event, const DecisionTree& tree,
                                       std::size_t n, std::size_t k,
                                       const Rational& c1 = Rational(1, 4),
                                       TauVariant variant = TauVariant::standard,
                                       std::size_t max_n = kCouplingExactMaxN);

struct TermIdentityEstimate {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  double c1 = 0.25;
  Estimate rhs;              // P(exactly one of X, Z^(n) in A)
  Estimate term1;
  Estimate term2;
  Estimate paired_difference;  // 1{!(X,Z^(n),A)} - 1{!(X,Y,A)}, mean 0
  double reference = 0.0;      // 2 P(A)(1-P(A)), exact when enumerable
  bool reference_exact = false;
  double z_score = 0.0;        // of rhs against the reference
  bool passed(double sigmas = 4.0) const;
};

// Monte Carlo version; the reference 2P(A)(1-P(A)) is computed exactly
// when binom(n,k) <= reference_cap and estimated otherwise.
TermIdentityEstimate estimate_term_identity(const IncreasingEvent& event,
                                            const DecisionTree& tree, std::size_t n,
                                            std::size_t k, std::size_t samples,
                                            const ParallelOptions& parallel, double c1 = 0.25,
                                            TauVariant variant = TauVariant::standard,
                                            std::uint64_t reference_cap = 10'000'000);

struct ClaimReport {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t t = 0;
  std::size_t cells = 0;             // attainable conditioning cells
  std::size_t mismatched_cells = 0;
  bool passed() const { return mismatched_cells == 0; }
};

// For each cell (X on e_[t] with t <= tau, the matched pairs, X on the
// singletons) compares the exact conditional laws of Z^(t) and Y.
ClaimReport check_claim_distributional_equality(const IncreasingEvent& event,
                                                const DecisionTree& tree, std::size_t n,
                                                std::size_t k, std::size_t t,
                                                TauVariant variant = TauVariant::standard,
                                                std::size_t max_n = kCouplingExactMaxN);

// Search over small instances for positive correlation between
// {exactly one of X, Y in A} and {d(X,Y) < c1 n}.
struct CorrelationRow {
  std::string event;
  std::size_t n = 0;
  std::size_t k = 0;
  Rational joint;       // P(!(X,Y,A), d < c1 n)
  Rational product;     // P(!(X,Y,A)) P(d < c1 n)
  bool positively_correlated() const { return joint > product; }
};

CorrelationRow correlation_row(const IncreasingEvent& event, std::size_t k,
                               const Rational& c1 = Rational(1, 4),
                               std::uint64_t cap = 1'000'000);

std::vector<CorrelationRow> negative_correlation_search(const std::vector<IncreasingEvent>& events,
                                                        const Rational& c1 = Rational(1, 4),
                                                        std::uint64_t cap = 1'000'000);

}  // namespace kofn
