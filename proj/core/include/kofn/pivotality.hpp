#pragma once

#include <cstddef>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/events.hpp"
#include "kofn/measures.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"

namespace kofn {

// e is pivotal if exactly one of omega and omega^(e) lies in A.
bool is_pivotal(const IncreasingEvent& event, const Configuration& omega, Element e);
// Pivotal and omega_e = 0.
bool is_zero_pivotal(const IncreasingEvent& event, const Configuration& omega, Element e);
// (e, f), e != f, is pivotal if exactly one of omega and omega^(e,f) lies in A.
bool is_pivotal_pair(const IncreasingEvent& event, const Configuration& omega, Element e,
                     Element f);

// Number of 0-pivotal elements of omega.
std::size_t count_zero_pivotals(const IncreasingEvent& event, const Configuration& omega);

// P_{k,n}(A), exact.
Rational probability_exact(const IncreasingEvent& event, const KOutOfN& measure,
                           std::uint64_t cap = kDefaultEnumerationCap);

// I(e) = P_{k,n}(e is 0-pivotal), exact.
Rational influence_exact(const IncreasingEvent& event, const KOutOfN& measure, Element e,
                         std::uint64_t cap = kDefaultEnumerationCap);

// All influences in one pass over Omega_{k,n}.
std::vector<Rational> influences_exact(const IncreasingEvent& event, const KOutOfN& measure,
                                       std::uint64_t cap = kDefaultEnumerationCap);

// Monte Carlo influences: per-element proportion with standard error
// sqrt(p(1-p)/(N-1)) (sample std over sqrt N).
struct InfluenceEstimates {
  std::vector<Estimate> values;
  std::size_t samples = 0;
};

Estimate influence_mc(const IncreasingEvent& event, const KOutOfN& measure, Element e,
                      std::size_t samples, Rng& rng);
InfluenceEstimates influences_mc(const IncreasingEvent& event, const KOutOfN& measure,
                                 std::size_t samples, const ParallelOptions& parallel);

Estimate probability_mc(const IncreasingEvent& event, const KOutOfN& measure,
                        std::size_t samples, const ParallelOptions& parallel);

}  // namespace kofn
