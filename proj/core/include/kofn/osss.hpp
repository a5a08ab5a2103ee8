#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kofn/events.hpp"
#include "kofn/measures.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"
#include "kofn/trees.hpp"

namespace kofn {

// Both sides of P(A)(1-P(A)) <= C (sum_e I(e) delta_e + sum_e I(e) avg_delta).
struct OsssReport {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  TauVariant variant = TauVariant::standard;
  Rational p_event;
  Rational lhs;
  Rational weighted_term;
  Rational average_term;
  Rational bracket;
  // lhs / bracket; empty means infinite (bracket 0 with lhs > 0). A zero
  // lhs with a zero bracket gives ratio 0.
  std::optional<Rational> ratio;
  bool degenerate = false;  // P(A) in {0, 1}
  std::vector<Rational> influences;
  ExactRevealments revealments;

  bool holds_at(const Rational& constant) const { return lhs <= constant * bracket; }
  double ratio_value() const;  // +inf for an infinite ratio
};

OsssReport verify_osss_exact(const IncreasingEvent& event, const DecisionTree& tree,
                             const KOutOfN& measure, TauVariant variant = TauVariant::standard,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Same assembly from precomputed ingredients.
OsssReport assemble_osss_report(const IncreasingEvent& event, const DecisionTree& tree,
                                const KOutOfN& measure, const Rational& p_event,
                                std::vector<Rational> influences, ExactRevealments revealments,
                                TauVariant variant);

// Monte Carlo counterpart. Samples are split into batches; each batch uses
// one sample set for P(A) and the influences and an independent one for the
// revealments, so sum_e I_b(e) delta_b(e) is unbiased per batch. Standard
// errors are batch-means; the ratio error uses the delta method.
struct OsssEstimate {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t samples = 0;  // per side, over all batches
  std::size_t batches = 0;
  Estimate p_event;
  Estimate lhs;
  Estimate weighted_term;
  Estimate average_term;
  Estimate bracket;
  Estimate ratio;

  // ratio <= constant + sigmas * se(ratio).
  bool holds_at(double constant, double sigmas = 4.0) const {
    return ratio.mean <= constant + sigmas * ratio.std_error;
  }
};

// Per-batch ingredients: influence and revealment vectors and P(A).
struct OsssBatch {
  double p_event = 0.0;
  std::size_t influence_samples = 0;
  std::vector<double> influence;
  std::vector<double> revealment;
};

// Combines batches; when `exact_lhs` is given it replaces the estimated
// P(A)(1-P(A)) (for events whose probability is known by symmetry).
OsssEstimate assemble_osss_estimate(const std::vector<OsssBatch>& batches,
                                    std::optional<double> exact_lhs = std::nullopt);

OsssEstimate verify_osss_mc(const IncreasingEvent& event, const DecisionTree& tree,
                            const KOutOfN& measure, std::size_t samples,
                            const ParallelOptions& parallel, std::size_t batches = 20,
                            TauVariant variant = TauVariant::standard);

// --- Constant search over suites ---------------------------------------

struct OsssRow {
  std::string event;
  std::string tree;
  std::size_t n = 0;
  std::size_t k = 0;
  Rational lhs;
  Rational weighted_term;
  Rational average_term;
  std::optional<Rational> ratio;
  bool degenerate = false;
};

struct SuiteAtN {
  std::size_t n = 0;
  std::vector<std::size_t> ks;
  std::vector<IncreasingEvent> events;
  std::vector<DecisionTree> trees;
};

struct ConstantCell {
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<Rational> max_ratio;  // empty means infinite
  std::size_t instances = 0;
};

struct EpsilonCell {
  double epsilon = 0.0;
  std::optional<Rational> max_ratio;
  std::size_t instances = 0;
};

struct ConstantSearch {
  std::vector<OsssRow> rows;
  std::vector<ConstantCell> per_measure;
  std::vector<EpsilonCell> per_epsilon;
  std::optional<Rational> global_max;  // empty means infinite (when rows exist)
  bool infinite = false;

  // Every row satisfies lhs <= C * bracket.
  bool holds_at(const Rational& constant) const;
};

inline const std::vector<double> kDefaultEpsilonGrid{0.1, 0.2, 0.3, 0.4, 0.5};

ConstantSearch search_constant(const std::vector<SuiteAtN>& suites,
                               const std::vector<double>& epsilons = kDefaultEpsilonGrid,
                               TauVariant variant = TauVariant::standard, unsigned workers = 1,
                               std::uint64_t cap = kDefaultEnumerationCap);

std::string ratio_string(const std::optional<Rational>& ratio);

}  // namespace kofn
