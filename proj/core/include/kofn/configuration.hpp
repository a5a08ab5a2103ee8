#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kofn {

// Elements of the ground set are the integers 0..n-1.
using Element = std::uint32_t;

// Size of a ground set {0, ..., n-1}; n >= 1.
class GroundSet {
 public:
  explicit GroundSet(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  bool contains(std::size_t e) const noexcept { return e < n_; }

 private:
  std::size_t n_;
};

// A 0/1 assignment over {0, ..., n-1}, bit-packed, with a cached popcount.
//
// Ordering is lexicographic on the bit string read from element 0 upwards,
// so "001" < "010" < "100".
class Configuration {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Configuration() = default;
  explicit Configuration(std::size_t n);

  // "0101" -> element 0 is '0', element 1 is '1', ...
  static Configuration from_string(std::string_view bits);
  static Configuration from_ones(std::size_t n, std::span<const Element> ones);

  std::size_t size() const noexcept { return n_; }
  std::size_t ones() const noexcept { return ones_; }
  std::size_t zeros() const noexcept { return n_ - ones_; }

  // Unchecked read.
  bool operator[](std::size_t e) const noexcept {
    return (words_[e / kWordBits] >> (e % kWordBits)) & 1U;
  }
  // Checked read; throws IndexError.
  bool at(std::size_t e) const;

  // In-place edits keep the popcount cache consistent. Checked.
  void set(std::size_t e, bool value);
  void toggle(std::size_t e);
  void exchange(std::size_t e, std::size_t f);

  // omega^(e): value at e replaced by its complement.
  Configuration flipped(std::size_t e) const;
  // omega^(e,f): values at e and f exchanged.
  Configuration swapped(std::size_t e, std::size_t f) const;

  // Coordinatewise order omega <= sigma.
  bool leq(const Configuration& other) const;
  // True iff every element set in `mask` is set here.
  bool contains_all(const Configuration& mask) const;
  // True iff some element set in `mask` is set here.
  bool intersects(const Configuration& mask) const;
  // Number of elements where the two configurations differ.
  std::size_t hamming_distance(const Configuration& other) const;

  std::vector<Element> one_positions() const;
  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }

  std::string to_string() const;

  bool operator==(const Configuration& other) const noexcept {
    return n_ == other.n_ && std::equal(words_.begin(), words_.end(), other.words_.begin());
  }
  std::strong_ordering operator<=>(const Configuration& other) const noexcept;

 private:
  void check_index(std::size_t e) const;
  void check_same_size(const Configuration& other) const;

  std::size_t n_ = 0;
  std::size_t ones_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

}  // namespace kofn
