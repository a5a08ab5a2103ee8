#include "kofn/trees.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/random.hpp"

namespace kofn {
namespace {

class FixedOrderCursor final : public QueryCursor {
 public:
  explicit FixedOrderCursor(std::shared_ptr<const std::vector<Element>> order)
      : order_(std::move(order)) {}
  Element next() override { return pos_ < order_->size() ? (*order_)[pos_] : Element(order_->size()); }
  void observe(Element, bool) override { ++pos_; }

 private:
  std::shared_ptr<const std::vector<Element>> order_;
  std::size_t pos_ = 0;
};

class RuleCursor final : public QueryCursor {
 public:
  explicit RuleCursor(std::shared_ptr<const DecisionTree::SuccessorRule> rule)
      : rule_(std::move(rule)) {}
  Element next() override { return (*rule_)(order_, values_); }
  void observe(Element e, bool value) override {
    order_.push_back(e);
    values_.push_back(value ? 1 : 0);
  }

 private:
  std::shared_ptr<const DecisionTree::SuccessorRule> rule_;
  std::vector<Element> order_;
  std::vector<std::uint8_t> values_;
};

class BalancedSplitCursor final : public QueryCursor {
 public:
  BalancedSplitCursor(std::size_t n, std::uint64_t seed)
      : hash_(splitmix64(seed)), unrevealed_(n), where_(n) {
    std::iota(unrevealed_.begin(), unrevealed_.end(), Element{0});
    std::iota(where_.begin(), where_.end(), std::size_t{0});
  }

  Element next() override {
    if (unrevealed_.empty()) return static_cast<Element>(where_.size());
    return unrevealed_[hash_ % unrevealed_.size()];
  }

  void observe(Element e, bool value) override {
    hash_ = splitmix64(hash_ ^ (2 * std::uint64_t{e} + (value ? 1 : 0) + 1));
    const std::size_t at = where_[e];
    const Element last = unrevealed_.back();
    unrevealed_[at] = last;
    where_[last] = at;
    unrevealed_.pop_back();
  }

 private:
  std::uint64_t hash_;
  std::vector<Element> unrevealed_;
  std::vector<std::size_t> where_;
};

void check_sizes(const DecisionTree& tree, const IncreasingEvent& event,
                 const Configuration& omega) {
  if (tree.size() != event.size() || omega.size() != event.size()) {
    throw DimensionError("tree on " + std::to_string(tree.size()) + ", event on " +
                         std::to_string(event.size()) + " and configuration of length " +
                         std::to_string(omega.size()) + " must agree");
  }
}

}  // namespace

DecisionTree::DecisionTree(std::string name, std::size_t n, CursorFactory factory) {
  if (n == 0) throw DomainError("decision trees need n >= 1");
  if (!factory) throw DomainError("decision tree '" + name + "' needs a cursor factory");
  impl_ = std::make_shared<const Impl>(Impl{std::move(name), n, std::move(factory)});
}

DecisionTree DecisionTree::from_rule(std::string name, std::size_t n, SuccessorRule rule) {
  auto shared = std::make_shared<const SuccessorRule>(std::move(rule));
  return DecisionTree(std::move(name), n, [shared]() -> std::unique_ptr<QueryCursor> {
    return std::make_unique<RuleCursor>(shared);
  });
}

Element DecisionTree::first() const { return cursor()->next(); }

Element DecisionTree::successor(std::span<const Element> order,
                                std::span<const std::uint8_t> values) const {
  if (order.size() != values.size()) {
    throw DimensionError("history needs one value per revealed element");
  }
  auto c = cursor();
  for (std::size_t i = 0; i < order.size(); ++i) c->observe(order[i], values[i] != 0);
  return c->next();
}

DecisionTree fixed_order(std::vector<Element> permutation, std::string name) {
  const std::size_t n = permutation.size();
  std::vector<std::uint8_t> seen(n, 0);
  for (Element e : permutation) {
    if (e >= n || seen[e]) throw TreeDefinitionError("fixed_order needs a permutation of 0..n-1");
    seen[e] = 1;
  }
  if (name.empty()) {
    name = "order(";
    for (std::size_t i = 0; i < n; ++i) name += (i ? " " : "") + std::to_string(permutation[i]);
    name += ")";
  }
  auto shared = std::make_shared<const std::vector<Element>>(std::move(permutation));
  return DecisionTree(std::move(name), n, [shared]() -> std::unique_ptr<QueryCursor> {
    return std::make_unique<FixedOrderCursor>(shared);
  });
}

DecisionTree identity_order(std::size_t n) {
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), Element{0});
  return fixed_order(std::move(perm), "identity");
}

DecisionTree query_first(std::size_t n, Element e) {
  if (e >= n) throw IndexError("query_first element outside [0, n)");
  std::vector<Element> perm{e};
  for (Element f = 0; f < n; ++f) {
    if (f != e) perm.push_back(f);
  }
  return fixed_order(std::move(perm), "first(" + std::to_string(e) + ")");
}

DecisionTree random_order(std::size_t n, std::uint64_t seed) {
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), Element{0});
  Rng rng{splitmix64(seed)};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(perm[i], perm[j]);
  }
  return fixed_order(std::move(perm), "random_order#" + std::to_string(seed));
}

DecisionTree balanced_split(std::size_t n, std::uint64_t seed) {
  return DecisionTree("balanced_split#" + std::to_string(seed), n,
                      [n, seed]() -> std::unique_ptr<QueryCursor> {
                        return std::make_unique<BalancedSplitCursor>(n, seed);
                      });
}

std::vector<DecisionTree> generated_tree_suite(std::size_t n, std::size_t count,
                                               std::uint64_t seed) {
  std::vector<DecisionTree> suite;
  if (count == 0) return suite;
  suite.push_back(identity_order(n));
  for (std::uint64_t i = 0; suite.size() < count; ++i) {
    const std::uint64_t s = stream_seed(seed, i);
    if (i % 2 == 0) {
      suite.push_back(random_order(n, s));
    } else {
      suite.push_back(balanced_split(n, s));
    }
  }
  return suite;
}

const char* to_string(TauVariant variant) noexcept {
  return variant == TauVariant::standard ? "standard" : "fixed-weight";
}

TauVariant parse_tau_variant(std::string_view text) {
  if (text == "standard") return TauVariant::standard;
  if (text == "fixed-weight" || text == "fixed_weight") return TauVariant::fixed_weight;
  throw DomainError("unknown tau variant '" + std::string(text) +
                    "' (expected standard or fixed-weight)");
}

std::optional<bool> determined_by_completions(const IncreasingEvent& event,
                                              const Configuration& omega,
                                              const std::vector<std::uint8_t>& revealed,
                                              TauVariant variant, std::size_t max_free) {
  const std::size_t n = omega.size();
  if (revealed.size() != n || event.size() != n) {
    throw DimensionError("revealed mask, configuration and event sizes must agree");
  }
  std::vector<Element> free;
  Configuration base = omega;
  std::size_t known_ones = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (revealed[e]) {
      known_ones += omega[e] ? 1 : 0;
    } else {
      free.push_back(static_cast<Element>(e));
      base.set(e, false);
    }
  }
  if (free.size() > max_free) {
    throw ResourceError("completion enumeration over " + std::to_string(free.size()) +
                        " unknown coordinates exceeds the limit of " + std::to_string(max_free));
  }
  std::optional<bool> seen;
  auto visit = [&](const Configuration& c) {
    const bool in = event.contains(c);
    if (!seen) {
      seen = in;
      return true;
    }
    return *seen == in;
  };
  if (variant == TauVariant::standard) {
    Configuration c = base;
    const std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t code = 0; code < total; ++code) {
      for (std::size_t i = 0; i < free.size(); ++i) c.set(free[i], (code >> i) & 1U);
      if (!visit(c)) return std::nullopt;
    }
    return seen;
  }
  const std::size_t need = omega.ones() - known_ones;
  KSubsetEnumerator en(free.size(), need);
  Configuration c = base;
  for (const auto& pick : en) {
    for (std::size_t i = 0; i < free.size(); ++i) c.set(free[i], pick[i]);
    if (!visit(c)) return std::nullopt;
  }
  return seen;
}

Transcript run_tree(const DecisionTree& tree, const IncreasingEvent& event,
                    const Configuration& omega, TauVariant variant) {
  check_sizes(tree, event, omega);
  const std::size_t n = omega.size();
  Transcript t;
  auto tracker = event.make_tracker();
  std::vector<std::uint8_t> revealed(n, 0);
  auto determined = [&]() -> std::optional<bool> {
    if (auto d = tracker->decided()) return d;
    if (variant == TauVariant::fixed_weight) {
      return determined_by_completions(event, omega, revealed, variant, n);
    }
    return std::nullopt;
  };
  auto cursor = tree.cursor();
  std::optional<bool> decision = determined();
  while (!decision && t.order.size() < n) {
    const Element e = cursor->next();
    if (e >= n) {
      throw TreeDefinitionError("tree '" + tree.name() + "' proposed element " +
                                std::to_string(e) + " outside [0, " + std::to_string(n) + ")");
    }
    if (revealed[e]) {
      throw TreeDefinitionError("tree '" + tree.name() + "' proposed element " +
                                std::to_string(e) + " twice");
    }
    const bool v = omega[e];
    revealed[e] = 1;
    tracker->reveal(e, v);
    cursor->observe(e, v);
    t.order.push_back(e);
    t.values.push_back(v ? 1 : 0);
    decision = determined();
  }
  // With every coordinate revealed the membership is known outright.
  t.decision = decision ? *decision : event.contains(omega);
  t.tau = t.order.size();
  return t;
}

bool tau_certificate_check(const DecisionTree& tree, const IncreasingEvent& event,
                           const Configuration& omega, const Transcript& transcript,
                           TauVariant variant) {
  check_sizes(tree, event, omega);
  const std::size_t n = omega.size();
  if (transcript.tau > n || transcript.order.size() != transcript.tau) return false;
  std::vector<std::uint8_t> revealed(n, 0);
  // Replay: the transcript must follow the tree and match omega.
  for (std::size_t i = 0; i < transcript.tau; ++i) {
    const Element e = transcript.order[i];
    std::span<const Element> prefix(transcript.order.data(), i);
    std::span<const std::uint8_t> vals(transcript.values.data(), i);
    if (tree.successor(prefix, vals) != e) return false;
    if (e >= n || revealed[e] || (transcript.values[i] != 0) != omega[e]) return false;
    revealed[e] = 1;
  }
  const auto at_tau = determined_by_completions(event, omega, revealed, variant, 24);
  if (!at_tau || *at_tau != event.contains(omega)) return false;
  if (transcript.tau == 0) return true;
  revealed[transcript.order[transcript.tau - 1]] = 0;
  return !determined_by_completions(event, omega, revealed, variant, 24).has_value();
}

ExactRevealments revealments_exact(const DecisionTree& tree, const IncreasingEvent& event,
                                   const KOutOfN& measure, TauVariant variant,
                                   std::uint64_t cap) {
  const std::size_t n = measure.n();
  if (tree.size() != n || event.size() != n) {
    throw DimensionError("tree, event and measure sizes must agree");
  }
  std::vector<unsigned long> counts(n, 0);
  unsigned long tau_sum = 0;
  auto en = measure.enumerate(cap);
  for (const auto& omega : en) {
    const Transcript t = run_tree(tree, event, omega, variant);
    for (Element e : t.order) ++counts[e];
    tau_sum += t.tau;
  }
  ExactRevealments out;
  const BigInt& total = measure.support_size();
  out.delta.reserve(n);
  for (auto c : counts) out.delta.push_back(make_rational(BigInt(c), total));
  out.expected_tau = make_rational(BigInt(tau_sum), total);
  out.average = out.expected_tau / Rational(static_cast<long>(n));
  return out;
}

namespace {

struct RevealmentAccumulator {
  std::vector<std::size_t> counts;
  RunningStats tau;
  void merge(const RevealmentAccumulator& other) {
    if (counts.empty()) counts.assign(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    tau.merge(other.tau);
  }
};

}  // namespace

RevealmentEstimate revealments_mc(const DecisionTree& tree, const IncreasingEvent& event,
                                  const KOutOfN& measure, std::size_t samples,
                                  const ParallelOptions& parallel, TauVariant variant) {
  const std::size_t n = measure.n();
  if (tree.size() != n || event.size() != n) {
    throw DimensionError("tree, event and measure sizes must agree");
  }
  auto acc = parallel_accumulate<RevealmentAccumulator>(
      samples, parallel, [&](Rng& rng, std::size_t count) {
        RevealmentAccumulator local;
        local.counts.assign(n, 0);
        Configuration omega(n);
        std::vector<Element> scratch;
        for (std::size_t i = 0; i < count; ++i) {
          measure.sample_into(rng, omega, scratch);
          const Transcript t = run_tree(tree, event, omega, variant);
          for (Element e : t.order) ++local.counts[e];
          local.tau.add(static_cast<double>(t.tau));
        }
        return local;
      });
  RevealmentEstimate out;
  out.samples = samples;
  out.delta.reserve(n);
  for (std::size_t e = 0; e < n; ++e) out.delta.push_back(proportion_estimate(acc.counts[e], samples));
  out.tau = acc.tau.estimate();
  out.average = out.tau;
  out.average.mean /= static_cast<double>(n);
  out.average.std_error /= static_cast<double>(n);
  return out;
}

}  // namespace kofn
