#include "kofn/measures.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kofn/errors.hpp"

namespace kofn {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigInt(0);
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

KSubsetEnumerator::KSubsetEnumerator(std::size_t n, std::size_t k)
    : n_(n), k_(k), from_right_(k), current_(n) {
  if (k > n) throw DomainError("k-subset enumeration needs k <= n");
  std::iota(from_right_.begin(), from_right_.end(), std::size_t{0});
  for (std::size_t p : from_right_) current_.set(n_ - 1 - p, true);
}

void KSubsetEnumerator::advance() {
  if (done_) return;
  std::size_t j = 0;
  while (j < k_) {
    const std::size_t limit = (j + 1 < k_) ? from_right_[j + 1] : n_;
    if (from_right_[j] + 1 < limit) break;
    ++j;
  }
  if (j == k_) {
    done_ = true;
    return;
  }
  for (std::size_t i = 0; i <= j; ++i) current_.set(n_ - 1 - from_right_[i], false);
  ++from_right_[j];
  for (std::size_t i = 0; i < j; ++i) from_right_[i] = i;
  for (std::size_t i = 0; i <= j; ++i) current_.set(n_ - 1 - from_right_[i], true);
}

KOutOfN::KOutOfN(std::size_t n, std::size_t k) : n_(n), k_(k), support_size_(binomial(n, k)) {
  if (n == 0) throw DomainError("k-out-of-n measure needs n >= 1");
  if (k > n) {
    throw DomainError("k-out-of-n measure needs 0 <= k <= n (got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  }
}

Rational KOutOfN::mass(const Configuration& omega) const {
  if (omega.size() != n_) {
    throw DimensionError("configuration of length " + std::to_string(omega.size()) +
                         " under a measure on " + std::to_string(n_) + " elements");
  }
  if (omega.ones() != k_) return Rational(0);
  return make_rational(BigInt(1), support_size_);
}

void KOutOfN::sample_into(Rng& rng, Configuration& out, std::vector<Element>& scratch) const {
  const bool pick_ones = k_ <= n_ - k_;
  const std::size_t picks = pick_ones ? k_ : n_ - k_;
  scratch.resize(n_);
  std::iota(scratch.begin(), scratch.end(), Element{0});
  for (std::size_t i = 0; i < picks; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n_ - i));
    std::swap(scratch[i], scratch[j]);
  }
  if (out.size() != n_) out = Configuration(n_);
  // Reset to the background value, then write the picked positions.
  for (std::size_t e = 0; e < n_; ++e) out.set(e, !pick_ones);
  for (std::size_t i = 0; i < picks; ++i) out.set(scratch[i], pick_ones);
}

Configuration KOutOfN::sample(Rng& rng) const {
  Configuration out(n_);
  std::vector<Element> scratch;
  sample_into(rng, out, scratch);
  return out;
}

void KOutOfN::check_enumerable(std::uint64_t cap) const {
  if (support_size_ > BigInt(static_cast<unsigned long>(cap))) {
    throw ResourceError("enumerating binom(" + std::to_string(n_) + "," + std::to_string(k_) +
                        ") = " + support_size_.get_str() + " configurations exceeds the cap of " +
                        std::to_string(cap));
  }
}

std::uint64_t KOutOfN::support_size_capped(std::uint64_t cap) const {
  check_enumerable(cap);
  return support_size_.get_ui();
}

KSubsetEnumerator KOutOfN::enumerate(std::uint64_t cap) const {
  check_enumerable(cap);
  return KSubsetEnumerator(n_, k_);
}

void KOutOfN::for_each(const std::function<void(const Configuration&)>& visit,
                       std::uint64_t cap) const {
  auto en = enumerate(cap);
  for (const auto& omega : en) visit(omega);
}

Configuration flip(const Configuration& omega, std::size_t e) { return omega.flipped(e); }

Configuration swap(const Configuration& omega, std::size_t e, std::size_t f) {
  return omega.swapped(e, f);
}

DisagreementDistribution::DisagreementDistribution(std::size_t n, std::size_t k)
    : n_(n), k_(k), pmf_(n + 1, Rational(0)) {
  if (k > n) throw DomainError("disagreement distribution needs 0 <= k <= n");
  // |X and Y| is hypergeometric: choose j of Y's ones inside X's k ones.
  const BigInt total = binomial(n, k);
  for (std::size_t j = 0; j <= k; ++j) {
    if (k - j > n - k) continue;
    const BigInt ways = binomial(k, j) * binomial(n - k, k - j);
    pmf_[2 * (k - j)] += make_rational(ways, total);
  }
}

Rational DisagreementDistribution::mean() const {
  Rational m(0);
  for (std::size_t d = 0; d < pmf_.size(); ++d) m += pmf_[d] * Rational(static_cast<long>(d));
  return m;
}

Rational DisagreementDistribution::probability_below(const Rational& threshold) const {
  Rational p(0);
  for (std::size_t d = 0; d < pmf_.size(); ++d) {
    if (Rational(static_cast<long>(d)) < threshold) p += pmf_[d];
  }
  return p;
}

DisagreementDistribution disagreement_distribution(std::size_t n, std::size_t k) {
  return DisagreementDistribution(n, k);
}

}  // namespace kofn
