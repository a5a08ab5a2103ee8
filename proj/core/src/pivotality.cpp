#include "kofn/pivotality.hpp"

#include <string>

#include "kofn/errors.hpp"

namespace kofn {
namespace {

void check_event_measure(const IncreasingEvent& event, const KOutOfN& measure) {
  if (event.size() != measure.n()) {
    throw DimensionError("event on " + std::to_string(event.size()) +
                         " elements paired with a measure on " + std::to_string(measure.n()));
  }
}

struct CountAccumulator {
  std::vector<std::size_t> hits;
  std::size_t samples = 0;
  void merge(const CountAccumulator& other) {
    if (hits.empty()) hits.assign(other.hits.size(), 0);
    for (std::size_t i = 0; i < other.hits.size(); ++i) hits[i] += other.hits[i];
    samples += other.samples;
  }
};

}  // namespace

bool is_pivotal(const IncreasingEvent& event, const Configuration& omega, Element e) {
  return event.contains(omega) != event.contains(omega.flipped(e));
}

bool is_zero_pivotal(const IncreasingEvent& event, const Configuration& omega, Element e) {
  return !omega.at(e) && is_pivotal(event, omega, e);
}

bool is_pivotal_pair(const IncreasingEvent& event, const Configuration& omega, Element e,
                     Element f) {
  if (e == f) throw DomainError("a pivotal pair needs two distinct elements");
  return event.contains(omega) != event.contains(omega.swapped(e, f));
}

std::size_t count_zero_pivotals(const IncreasingEvent& event, const Configuration& omega) {
  // For increasing A a 0-pivotal element needs omega outside A.
  if (event.contains(omega)) return 0;
  std::size_t count = 0;
  Configuration raised = omega;
  for (std::size_t e = 0; e < omega.size(); ++e) {
    if (omega[e]) continue;
    raised.set(e, true);
    if (event.contains(raised)) ++count;
    raised.set(e, false);
  }
  return count;
}

Rational probability_exact(const IncreasingEvent& event, const KOutOfN& measure,
                           std::uint64_t cap) {
  check_event_measure(event, measure);
  auto en = measure.enumerate(cap);
  unsigned long hits = 0;
  for (const auto& omega : en) hits += event.contains(omega) ? 1 : 0;
  return make_rational(BigInt(hits), measure.support_size());
}

Rational influence_exact(const IncreasingEvent& event, const KOutOfN& measure, Element e,
                         std::uint64_t cap) {
  check_event_measure(event, measure);
  if (e >= measure.n()) throw IndexError("influence of an element outside [0, n)");
  auto en = measure.enumerate(cap);
  unsigned long hits = 0;
  for (const auto& omega : en) {
    if (!omega[e] && is_pivotal(event, omega, e)) ++hits;
  }
  return make_rational(BigInt(hits), measure.support_size());
}

std::vector<Rational> influences_exact(const IncreasingEvent& event, const KOutOfN& measure,
                                       std::uint64_t cap) {
  check_event_measure(event, measure);
  const std::size_t n = measure.n();
  std::vector<unsigned long> hits(n, 0);
  auto en = measure.enumerate(cap);
  for (const auto& omega : en) {
    // Increasing A: e is 0-pivotal iff omega_e = 0, omega not in A, omega^(e) in A.
    if (event.contains(omega)) continue;
    Configuration raised = omega;
    for (std::size_t e = 0; e < n; ++e) {
      if (omega[e]) continue;
      raised.set(e, true);
      if (event.contains(raised)) ++hits[e];
      raised.set(e, false);
    }
  }
  std::vector<Rational> out;
  out.reserve(n);
  for (auto h : hits) out.push_back(make_rational(BigInt(h), measure.support_size()));
  return out;
}

Estimate influence_mc(const IncreasingEvent& event, const KOutOfN& measure, Element e,
                      std::size_t samples, Rng& rng) {
  check_event_measure(event, measure);
  if (e >= measure.n()) throw IndexError("influence of an element outside [0, n)");
  Configuration omega(measure.n());
  std::vector<Element> scratch;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    measure.sample_into(rng, omega, scratch);
    if (!omega[e] && is_pivotal(event, omega, e)) ++hits;
  }
  return proportion_estimate(hits, samples);
}

InfluenceEstimates influences_mc(const IncreasingEvent& event, const KOutOfN& measure,
                                 std::size_t samples, const ParallelOptions& parallel) {
  check_event_measure(event, measure);
  const std::size_t n = measure.n();
  auto acc = parallel_accumulate<CountAccumulator>(samples, parallel, [&](Rng& rng,
                                                                          std::size_t count) {
    CountAccumulator local;
    local.hits.assign(n, 0);
    local.samples = count;
    Configuration omega(n);
    std::vector<Element> scratch;
    for (std::size_t i = 0; i < count; ++i) {
      measure.sample_into(rng, omega, scratch);
      if (event.contains(omega)) continue;
      for (std::size_t e = 0; e < n; ++e) {
        if (omega[e]) continue;
        omega.set(e, true);
        if (event.contains(omega)) ++local.hits[e];
        omega.set(e, false);
      }
    }
    return local;
  });
  InfluenceEstimates out;
  out.samples = samples;
  out.values.reserve(n);
  for (std::size_t e = 0; e < n; ++e) out.values.push_back(proportion_estimate(acc.hits[e], samples));
  return out;
}

Estimate probability_mc(const IncreasingEvent& event, const KOutOfN& measure,
                        std::size_t samples, const ParallelOptions& parallel) {
  check_event_measure(event, measure);
  auto acc = parallel_accumulate<CountAccumulator>(samples, parallel, [&](Rng& rng,
                                                                          std::size_t count) {
    CountAccumulator local;
    local.hits.assign(1, 0);
    local.samples = count;
    Configuration omega(measure.n());
    std::vector<Element> scratch;
    for (std::size_t i = 0; i < count; ++i) {
      measure.sample_into(rng, omega, scratch);
      if (event.contains(omega)) ++local.hits[0];
    }
    return local;
  });
  return proportion_estimate(acc.hits[0], samples);
}

}  // namespace kofn
