#pragma once

#include <stdexcept>
#include <string>

namespace kofn {

// Sizes of two objects that must agree do not (configuration vs. ground set,
// seed vs. measure, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An element index outside [0, n).
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Arguments outside the mathematical domain of an operation (k > n, weight
// mismatch for matchings, odd n where even is required, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested exact computation exceeds the configured enumeration cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A decision tree's successor rule returned an element that is out of range
// or already revealed.
class TreeDefinitionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kofn
