#pragma once

// Brute-force references: every quantity is recomputed from scratch over
// {0,1}^n, without the trackers, caches or enumerators of the library.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/events.hpp"
#include "kofn/rational.hpp"
#include "kofn/trees.hpp"

namespace kofn::oracle {

inline Configuration from_mask(std::size_t n, std::uint64_t mask) {
  Configuration c(n);
  for (std::size_t e = 0; e < n; ++e) {
    if ((mask >> e) & 1U) c.set(e, true);
  }
  return c;
}

inline std::vector<Configuration> all_configurations(std::size_t n) {
  std::vector<Configuration> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.push_back(from_mask(n, m));
  return out;
}

// Weight-k configurations, sorted by the library's ordering.
inline std::vector<Configuration> weight_k(std::size_t n, std::size_t k) {
  std::vector<Configuration> out;
  for (auto& c : all_configurations(n)) {
    if (c.ones() == k) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Rational probability(const IncreasingEvent& a, std::size_t k) {
  const auto support = weight_k(a.size(), k);
  std::size_t hits = 0;
  for (const auto& c : support) hits += a.contains(c) ? 1 : 0;
  return make_rational(BigInt(hits), BigInt(support.size()));
}

inline Rational influence(const IncreasingEvent& a, std::size_t k, Element e) {
  const auto support = weight_k(a.size(), k);
  std::size_t hits = 0;
  for (const auto& c : support) {
    if (!c[e] && !a.contains(c) && a.contains(c.flipped(e))) ++hits;
  }
  return make_rational(BigInt(hits), BigInt(support.size()));
}

// Membership shared by every completion of the revealed coordinates (of
// weight |omega| under fixed_weight), if any.
inline std::optional<bool> determined(const IncreasingEvent& a, const Configuration& omega,
                                      const std::vector<std::uint8_t>& revealed, TauVariant v) {
  std::optional<bool> seen;
  for (const auto& c : all_configurations(a.size())) {
    bool agrees = true;
    for (std::size_t e = 0; e < a.size() && agrees; ++e) {
      if (revealed[e] && c[e] != omega[e]) agrees = false;
    }
    if (!agrees) continue;
    if (v == TauVariant::fixed_weight && c.ones() != omega.ones()) continue;
    const bool in = a.contains(c);
    if (seen && *seen != in) return std::nullopt;
    seen = in;
  }
  return seen;
}

// Query order and tau by asking `determined` before every query.
inline Transcript transcript(const DecisionTree& t, const IncreasingEvent& a,
                             const Configuration& omega, TauVariant v) {
  Transcript out;
  std::vector<std::uint8_t> revealed(a.size(), 0);
  auto cursor = t.cursor();
  while (!determined(a, omega, revealed, v)) {
    const Element e = cursor->next();
    revealed[e] = 1;
    cursor->observe(e, omega[e]);
    out.order.push_back(e);
    out.values.push_back(omega[e]);
  }
  out.tau = out.order.size();
  out.decision = a.contains(omega);
  return out;
}

inline std::vector<Rational> revealments(const DecisionTree& t, const IncreasingEvent& a,
                                         std::size_t k, TauVariant v) {
  const auto support = weight_k(a.size(), k);
  std::vector<std::size_t> counts(a.size(), 0);
  for (const auto& c : support) {
    for (Element e : transcript(t, a, c, v).order) ++counts[e];
  }
  std::vector<Rational> out;
  for (auto n : counts) out.push_back(make_rational(BigInt(n), BigInt(support.size())));
  return out;
}

}  // namespace kofn::oracle
