#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/events.hpp"
#include "kofn/measures.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"

namespace kofn {

// One execution of a decision tree. The cursor proposes the next element,
// the caller reveals it with observe(). Cursors may keep incremental state
// (the exploration walkers do); a fresh cursor starts from the empty history.
class QueryCursor {
 public:
  virtual ~QueryCursor() = default;
  virtual Element next() = 0;
  virtual void observe(Element e, bool value) = 0;
};

// T = (e_1, phi): first query plus a successor rule on revealed histories.
// Immutable; copies share the rule.
class DecisionTree {
 public:
  using CursorFactory = std::function<std::unique_ptr<QueryCursor>()>;
  // phi(order, values) -> next element; values[i] is the bit at order[i].
  using SuccessorRule =
      std::function<Element(std::span<const Element> order, std::span<const std::uint8_t> values)>;

  DecisionTree(std::string name, std::size_t n, CursorFactory factory);
  static DecisionTree from_rule(std::string name, std::size_t n, SuccessorRule rule);

  const std::string& name() const noexcept { return impl_->name; }
  std::size_t size() const noexcept { return impl_->n; }

  std::unique_ptr<QueryCursor> cursor() const { return impl_->factory(); }

  Element first() const;
  // phi_t evaluated by replaying the history through a fresh cursor.
  Element successor(std::span<const Element> order, std::span<const std::uint8_t> values) const;

 private:
  struct Impl {
    std::string name;
    std::size_t n = 0;
    CursorFactory factory;
  };
  std::shared_ptr<const Impl> impl_;
};

// Queries elements in the given order, ignoring values.
DecisionTree fixed_order(std::vector<Element> permutation, std::string name = {});
// 0, 1, ..., n-1.
DecisionTree identity_order(std::size_t n);
// e first, then the remaining elements in increasing order.
DecisionTree query_first(std::size_t n, Element e);
// A uniformly random permutation drawn once from `seed`.
DecisionTree random_order(std::size_t n, std::uint64_t seed);
// Value-adaptive: the next element is a pseudo-random unrevealed one chosen by
// hashing (seed, revealed history). Deterministic as a tree.
DecisionTree balanced_split(std::size_t n, std::uint64_t seed);

// identity_order, random_order, balanced_split, then alternating
// random_order / balanced_split with fresh seeds until `count` trees exist.
std::vector<DecisionTree> generated_tree_suite(std::size_t n, std::size_t count,
                                               std::uint64_t seed);

// Which completions count when deciding whether membership is determined:
// every omega' in {0,1}^n (standard), or only those with |omega'| = |omega|.
enum class TauVariant { standard, fixed_weight };

const char* to_string(TauVariant variant) noexcept;
TauVariant parse_tau_variant(std::string_view text);

struct Transcript {
  std::vector<Element> order;         // e_1, ..., e_tau
  std::vector<std::uint8_t> values;   // omega at order[i]
  std::size_t tau = 0;
  bool decision = false;              // 1_A(omega)
};

// Runs T on omega until membership in A is determined. Throws
// TreeDefinitionError if the tree proposes an out-of-range or repeated
// element, DimensionError on size mismatches.
Transcript run_tree(const DecisionTree& tree, const IncreasingEvent& event,
                    const Configuration& omega, TauVariant variant = TauVariant::standard);

// Membership of A determined by the revealed coordinates, by enumerating
// completions (with early exit). `revealed` marks the known coordinates of
// omega; under fixed_weight only completions of weight |omega| count.
// Throws ResourceError if more than `max_free` coordinates are unknown.
std::optional<bool> determined_by_completions(const IncreasingEvent& event,
                                              const Configuration& omega,
                                              const std::vector<std::uint8_t>& revealed,
                                              TauVariant variant, std::size_t max_free = 24);

// True iff membership is undetermined after tau - 1 queries and determined
// after tau, by independent completion enumeration.
bool tau_certificate_check(const DecisionTree& tree, const IncreasingEvent& event,
                           const Configuration& omega, const Transcript& transcript,
                           TauVariant variant = TauVariant::standard);

struct ExactRevealments {
  std::vector<Rational> delta;
  Rational average;       // (1/n) sum delta_e
  Rational expected_tau;  // equals sum delta_e
};

ExactRevealments revealments_exact(const DecisionTree& tree, const IncreasingEvent& event,
                                   const KOutOfN& measure,
                                   TauVariant variant = TauVariant::standard,
                                   std::uint64_t cap = kDefaultEnumerationCap);

struct RevealmentEstimate {
  std::vector<Estimate> delta;
  Estimate average;
  Estimate tau;
  std::size_t samples = 0;
};

RevealmentEstimate revealments_mc(const DecisionTree& tree, const IncreasingEvent& event,
                                  const KOutOfN& measure, std::size_t samples,
                                  const ParallelOptions& parallel,
                                  TauVariant variant = TauVariant::standard);

}  // namespace kofn
