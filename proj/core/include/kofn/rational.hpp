#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace kofn {

using Rational = mpq_class;
using BigInt = mpz_class;

// binom(n, k) as an arbitrary-precision integer; 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace kofn
