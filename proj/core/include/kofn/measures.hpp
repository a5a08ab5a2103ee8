#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <vector>

#include "kofn/configuration.hpp"
#include "kofn/random.hpp"
#include "kofn/rational.hpp"

namespace kofn {

// Default refusal threshold for exact enumeration of Omega_{k,n}.
inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

// Walks Omega_{k,n} in lexicographic order of bit strings (element 0 is the
// most significant position), i.e. "0011" < "0101" < ... < "1100".
class KSubsetEnumerator {
 public:
  KSubsetEnumerator(std::size_t n, std::size_t k);

  const Configuration& current() const noexcept { return current_; }
  bool done() const noexcept { return done_; }
  void advance();

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Configuration;
    using difference_type = std::ptrdiff_t;
    using pointer = const Configuration*;
    using reference = const Configuration&;

    iterator() = default;
    explicit iterator(KSubsetEnumerator* owner) : owner_(owner) {}
    reference operator*() const { return owner_->current(); }
    pointer operator->() const { return &owner_->current(); }
    iterator& operator++() {
      owner_->advance();
      return *this;
    }
    void operator++(int) { owner_->advance(); }
    bool operator==(std::default_sentinel_t) const { return owner_ == nullptr || owner_->done(); }

   private:
    KSubsetEnumerator* owner_ = nullptr;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::size_t n_;
  std::size_t k_;
  // Positions of the ones counted from the right end (n-1-e), ascending;
  // stepping these in colex order steps the strings in lexicographic order.
  std::vector<std::size_t> from_right_;
  Configuration current_;
  bool done_ = false;
};

// The k-out-of-n measure: uniform on configurations with exactly k ones.
class KOutOfN {
 public:
  KOutOfN(std::size_t n, std::size_t k);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  // |Omega_{k,n}| = binom(n, k).
  const BigInt& support_size() const noexcept { return support_size_; }

  // 1/binom(n,k) on |omega| = k, 0 otherwise. Throws DimensionError.
  Rational mass(const Configuration& omega) const;

  // Partial Fisher-Yates over the smaller of the one/zero index sets.
  Configuration sample(Rng& rng) const;
  // Reuses `out` and `scratch` storage; for hot loops.
  void sample_into(Rng& rng, Configuration& out, std::vector<Element>& scratch) const;

  // Lexicographic enumeration of Omega_{k,n}; throws ResourceError naming
  // binom(n,k) when it exceeds `cap`.
  KSubsetEnumerator enumerate(std::uint64_t cap = kDefaultEnumerationCap) const;
  void for_each(const std::function<void(const Configuration&)>& visit,
                std::uint64_t cap = kDefaultEnumerationCap) const;
  void check_enumerable(std::uint64_t cap) const;

  // binom(n,k) as a machine integer when it fits under `cap`.
  std::uint64_t support_size_capped(std::uint64_t cap = kDefaultEnumerationCap) const;

 private:
  std::size_t n_;
  std::size_t k_;
  BigInt support_size_;
};

// omega^(e) and omega^(e,f) as free functions (checked).
Configuration flip(const Configuration& omega, std::size_t e);
Configuration swap(const Configuration& omega, std::size_t e, std::size_t f);

// Law of d(X,Y) = 2(k - |X and Y|) for independent X, Y ~ P_{k,n}: entry d
// holds P(d(X,Y) = d), for d = 0..n. Masses sum to exactly 1.
class DisagreementDistribution {
 public:
  DisagreementDistribution(std::size_t n, std::size_t k);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  const std::vector<Rational>& pmf() const noexcept { return pmf_; }
  Rational probability(std::size_t d) const { return d < pmf_.size() ? pmf_[d] : Rational(0); }
  Rational mean() const;
  // P(d(X,Y) < threshold), threshold a rational such as c1 * n.
  Rational probability_below(const Rational& threshold) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<Rational> pmf_;
};

DisagreementDistribution disagreement_distribution(std::size_t n, std::size_t k);

}  // namespace kofn
