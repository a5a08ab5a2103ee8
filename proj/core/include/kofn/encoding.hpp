#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/measures.hpp"
#include "kofn/parallel.hpp"
#include "kofn/rational.hpp"
#include "kofn/stats.hpp"

namespace kofn {

// Uniforms on [0,1) at 64-bit resolution: entry w stands for w / 2^64, so
// comparisons against rational thresholds are exact.
class UniformSeed {
 public:
  UniformSeed() = default;
  explicit UniformSeed(std::vector<std::uint64_t> words) : words_(std::move(words)) {}
  // Each value must lie in [0,1); rounded down to the 2^-64 grid.
  static UniformSeed from_doubles(std::span<const double> values);
  static UniformSeed draw(std::size_t m, Rng& rng);

  std::size_t size() const noexcept { return words_.size(); }
  std::uint64_t word(std::size_t i) const { return words_.at(i); }
  double value(std::size_t i) const;
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  std::vector<std::uint64_t> words_;
};

// u < num/den at 64-bit resolution, exactly.
bool below_fraction(std::uint64_t u, std::uint64_t num, std::uint64_t den) noexcept;

// F^mu for mu = P_{k,n}: x_t = 0 iff u_t < zeros_left / slots_left.
// A tie u_t = threshold gives x_t = 1. Throws DimensionError if |u| != n.
Configuration encode_fmu(const KOutOfN& measure, const UniformSeed& u);

// Joint law of (Z, Z') with Z ~ P_{k,m}, Z' ~ P_{k+1,m}, Z' >= Z:
// P(alpha, beta) = P_{k,m}(alpha) / (m-k) on |alpha| = k, |beta| = k+1,
// beta >= alpha; 0 elsewhere.
struct PairMass {
  Configuration alpha;
  Configuration beta;
  Rational mass;
};

class CoupledPairLaw {
 public:
  CoupledPairLaw(std::size_t m, std::size_t k, std::vector<PairMass> entries);
  std::size_t m() const noexcept { return m_; }
  std::size_t k() const noexcept { return k_; }
  const std::vector<PairMass>& entries() const noexcept { return entries_; }
  // 0 off the support.
  Rational mass(const Configuration& alpha, const Configuration& beta) const;
  Rational total() const;

 private:
  std::size_t m_;
  std::size_t k_;
  std::vector<PairMass> entries_;
};

// The closed form above. Throws DomainError unless 1 <= k <= m-1.
CoupledPairLaw coupled_pair_law(std::size_t m, std::size_t k);

// Exact law of (F^{P_{k,m}}(U), F^{P_{k+1,m}}(U)) for a shared uniform U,
// by integrating over the cells j/s <= U_t < (j+1)/s that fix every
// comparison. m! cells; m <= 10.
CoupledPairLaw shared_seed_law_exact(std::size_t m, std::size_t k);

struct SharedSeedComparison {
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t samples = 0;
  double total_variation = 0.0;   // empirical joint vs closed form
  std::size_t order_violations = 0;  // draws with Z' not >= Z
  std::size_t off_support = 0;       // draws outside the closed-form support
};

SharedSeedComparison compare_shared_seed(std::size_t m, std::size_t k, std::size_t samples,
                                         const ParallelOptions& parallel);

// --- log n demonstration -----------------------------------------------------
//
// A = {omega_{n-1} = 1}, k = n/2, T = 0, 1, ..., n-1. With hybrids
// G_t = F(V_1..V_{t-1}, U_t..U_n), t = 1..n+1, term t is
// P(exactly one of G_t, G_{t+1} in A).

// Per-term indicators for one (U, V) pair, computed from the full hybrid
// encodings (O(n^2)); the reference for the fast sampler.
std::vector<std::uint8_t> logn_term_indicators(std::size_t n, const UniformSeed& u,
                                               const UniformSeed& v);

struct LognEstimate {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::vector<Estimate> terms;  // t = 1..n
  Estimate sum;
};

// Fresh (U, V) per sample, shared across t. Throws DomainError for odd n.
LognEstimate logn_sum_estimate(std::size_t n, std::size_t samples,
                               const ParallelOptions& parallel);

struct LognExact {
  std::size_t n = 0;
  std::vector<Rational> terms;
  Rational sum;
};

// Exact expectation by cell enumeration over (U, V); (n!)^2 cells, n <= 6.
LognExact logn_sum_exact_small(std::size_t n);

}  // namespace kofn
