#include "kofn/configuration.hpp"

#include <algorithm>
#include <string>

#include "kofn/errors.hpp"
#include "kofn/random.hpp"

namespace kofn {

GroundSet::GroundSet(std::size_t n) : n_(n) {
  if (n == 0) throw DomainError("ground set must have at least one element");
}

Configuration::Configuration(std::size_t n)
    : n_(n), words_((n + kWordBits - 1) / kWordBits, Word{0}) {}

Configuration Configuration::from_string(std::string_view bits) {
  Configuration c(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      c.set(i, true);
    } else if (bits[i] != '0') {
      throw DomainError("configuration strings contain only '0' and '1'");
    }
  }
  return c;
}

Configuration Configuration::from_ones(std::size_t n, std::span<const Element> ones) {
  Configuration c(n);
  for (Element e : ones) c.set(e, true);
  return c;
}

void Configuration::check_index(std::size_t e) const {
  if (e >= n_) {
    throw IndexError("element " + std::to_string(e) + " outside ground set of size " +
                     std::to_string(n_));
  }
}

void Configuration::check_same_size(const Configuration& other) const {
  if (other.n_ != n_) {
    throw DimensionError("configurations of sizes " + std::to_string(n_) + " and " +
                         std::to_string(other.n_) + " are not comparable");
  }
}

bool Configuration::at(std::size_t e) const {
  check_index(e);
  return (*this)[e];
}

void Configuration::set(std::size_t e, bool value) {
  check_index(e);
  const Word mask = Word{1} << (e % kWordBits);
  Word& w = words_[e / kWordBits];
  const bool old = (w & mask) != 0;
  if (old == value) return;
  if (value) {
    w |= mask;
    ++ones_;
  } else {
    w &= ~mask;
    --ones_;
  }
}

void Configuration::toggle(std::size_t e) {
  check_index(e);
  set(e, !(*this)[e]);
}

void Configuration::exchange(std::size_t e, std::size_t f) {
  check_index(e);
  check_index(f);
  const bool ve = (*this)[e];
  const bool vf = (*this)[f];
  if (ve == vf) return;
  set(e, vf);
  set(f, ve);
}

Configuration Configuration::flipped(std::size_t e) const {
  Configuration c = *this;
  c.toggle(e);
  return c;
}

Configuration Configuration::swapped(std::size_t e, std::size_t f) const {
  Configuration c = *this;
  c.exchange(e, f);
  return c;
}

bool Configuration::leq(const Configuration& other) const {
  check_same_size(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool Configuration::contains_all(const Configuration& mask) const { return mask.leq(*this); }

bool Configuration::intersects(const Configuration& mask) const {
  check_same_size(mask);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & mask.words_[i]) return true;
  }
  return false;
}

std::size_t Configuration::hamming_distance(const Configuration& other) const {
  check_same_size(other);
  std::size_t d = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  }
  return d;
}

std::vector<Element> Configuration::one_positions() const {
  std::vector<Element> out;
  out.reserve(ones_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    Word w = words_[i];
    while (w) {
      out.push_back(static_cast<Element>(i * kWordBits + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::string Configuration::to_string() const {
  std::string s(n_, '0');
  for (std::size_t e = 0; e < n_; ++e) {
    if ((*this)[e]) s[e] = '1';
  }
  return s;
}

std::strong_ordering Configuration::operator<=>(const Configuration& other) const noexcept {
  if (n_ != other.n_) return n_ <=> other.n_;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const Word diff = words_[i] ^ other.words_[i];
    if (diff) {
      // The first differing element decides; the side holding 0 is smaller.
      const Word low = diff & (0 - diff);
      return (words_[i] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::uint64_t h = splitmix64(c.size());
  for (auto w : c.words()) h = splitmix64(h ^ w);
  return static_cast<std::size_t>(h);
}

}  // namespace kofn
