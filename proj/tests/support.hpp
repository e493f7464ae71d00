#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "planelie/autmap.hpp"
#include "planelie/poly.hpp"
#include "planelie/vector_field.hpp"

namespace planelie::oracle {

/// Seeded generator for test data. Each test owns one by value.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) {
    return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin(unsigned one_in = 2) { return rng_() % one_in == 0; }

  /// Small rational with numerator in [-5, 5] and denominator in [1, 4].
  Scalar rational() {
    Scalar q(integer(-5, 5), integer(1, 4));
    q.canonicalize();
    return q;
  }

  Poly poly(std::uint32_t max_degree, bool rational_coefficients = false) {
    Poly p;
    for (std::uint32_t n = 0; n <= max_degree; ++n)
      for (std::uint32_t i = 0; i <= n; ++i)
        if (coin()) p.add_term({i, n - i}, rational_coefficients ? rational() : Scalar(integer(-4, 4)));
    return p;
  }

  VectorField field(std::uint32_t max_degree) { return {poly(max_degree), poly(max_degree)}; }

  std::uint64_t seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Oracles. These deliberately avoid the library's arithmetic.

inline Scalar power(const Scalar& b, std::uint32_t e) {
  Scalar r = 1;
  for (std::uint32_t k = 0; k < e; ++k) r *= b;
  return r;
}

/// p(a, b) by direct summation over the stored terms.
inline Scalar eval(const Poly& p, const Scalar& a, const Scalar& b) {
  Scalar s = 0;
  for (const auto& [m, c] : p.terms()) s += c * power(a, m.i) * power(b, m.j);
  return s;
}

/// Grid of (d+1)^2 points. A polynomial of total degree <= d vanishing on it
/// is zero, so agreement on the grid decides equality exactly.
inline std::vector<std::pair<Scalar, Scalar>> grid(std::uint32_t d) {
  std::vector<std::pair<Scalar, Scalar>> pts;
  for (std::uint32_t a = 0; a <= d; ++a)
    for (std::uint32_t b = 0; b <= d; ++b) pts.emplace_back(Scalar(a) - 1, Scalar(b) / 2 - 1);
  return pts;
}

/// Term-by-term derivative written independently of planelie::partial.
inline Poly naive_partial(const Poly& p, Var v) {
  Poly::Terms t;
  for (const auto& [m, c] : p.terms()) {
    const std::uint32_t e = v == Var::X ? m.i : m.j;
    if (e == 0) continue;
    const Monomial d = v == Var::X ? Monomial{m.i - 1, m.j} : Monomial{m.i, m.j - 1};
    t[d] += c * e;
  }
  return Poly(std::move(t));
}

/// Schoolbook product over explicit term pairs.
inline Poly naive_product(const Poly& a, const Poly& b) {
  Poly::Terms t;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) t[ma * mb] += ca * cb;
  return Poly(std::move(t));
}

inline Poly naive_bracket(const Poly& f, const Poly& g) {
  return naive_product(naive_partial(f, Var::X), naive_partial(g, Var::Y)) -
         naive_product(naive_partial(f, Var::Y), naive_partial(g, Var::X));
}

/// D_h = (-h_y, h_x).
inline VectorField naive_mu(const Poly& h) {
  return {-naive_partial(h, Var::Y), naive_partial(h, Var::X)};
}

/// D(h) from the oracle partials.
inline Poly naive_apply(const VectorField& d, const Poly& h) {
  return naive_product(d.p, naive_partial(h, Var::X)) + naive_product(d.q, naive_partial(h, Var::Y));
}

/// Component formula for [D1, D2].
inline VectorField naive_vf_bracket(const VectorField& a, const VectorField& b) {
  return {naive_apply(a, b.p) - naive_apply(b, a.p), naive_apply(a, b.q) - naive_apply(b, a.q)};
}

/// Checks p(f, g) at every grid point by evaluating f and g first.
inline bool composes_to(const Poly& result, const Poly& p, const Poly& f, const Poly& g) {
  const std::uint32_t df = f.degree().value_or(0), dg = g.degree().value_or(0);
  const std::uint32_t bound = p.degree().value_or(0) * std::max({df, dg, 1u});
  if (result.degree().value_or(0) > bound) return false;
  for (const auto& [a, b] : grid(bound))
    if (eval(result, a, b) != eval(p, eval(f, a, b), eval(g, a, b))) return false;
  return true;
}

inline Scalar jacobian_at(const PolyMap& m, const Scalar& a, const Scalar& b) {
  return eval(naive_partial(m.f, Var::X), a, b) * eval(naive_partial(m.g, Var::Y), a, b) -
         eval(naive_partial(m.f, Var::Y), a, b) * eval(naive_partial(m.g, Var::X), a, b);
}

inline Scalar binomial(std::uint32_t n, std::uint32_t k) {
  std::vector<std::vector<Scalar>> row(n + 1, std::vector<Scalar>(n + 1));
  for (std::uint32_t i = 0; i <= n; ++i) {
    row[i][0] = 1;
    for (std::uint32_t j = 1; j <= i; ++j) row[i][j] = row[i - 1][j - 1] + (j < i ? row[i - 1][j] : Scalar(0));
  }
  return row[n][k];
}

}  // namespace planelie::oracle
