#pragma once

#include <gmpxx.h>

#include <string>

namespace planelie {

// Exact rationals. gmpxx keeps arithmetic results canonical (reduced,
// positive denominator); values built from raw parts must go through
// make_scalar.
using Scalar = mpq_class;

inline Scalar make_scalar(const mpz_class& num, const mpz_class& den) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& s) { return s.get_str(); }

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

/// t^e for any integer e; t must be nonzero when e < 0.
inline Scalar ipow(const Scalar& t, long e) {
  Scalar base = e < 0 ? Scalar(1) / t : t;
  unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Scalar acc = 1;
  while (n) {
    if (n & 1UL) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

}  // namespace planelie
