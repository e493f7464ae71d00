#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "planelie/linalg.hpp"
#include "planelie/poly.hpp"

namespace planelie {

/// p*dx + q*dy, a derivation of K[x,y].
struct VectorField {
  Poly p;
  Poly q;

  static VectorField dx() { return {1, 0}; }
  static VectorField dy() { return {0, 1}; }

  bool is_zero() const { return p.is_zero() && q.is_zero(); }

  std::optional<std::uint32_t> degree() const {
    auto dp = p.degree(), dq = q.degree();
    if (!dp) return dq;
    if (!dq) return dp;
    return std::max(*dp, *dq);
  }

  VectorField& operator+=(const VectorField& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    p -= o.p;
    q -= o.q;
    return *this;
  }
  VectorField& operator*=(const Scalar& s) {
    p *= s;
    q *= s;
    return *this;
  }

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator-(VectorField a) { return a *= Scalar(-1); }
  friend VectorField operator*(const Scalar& s, VectorField a) { return a *= s; }
  friend VectorField operator*(VectorField a, const Scalar& s) { return a *= s; }
  /// Function multiple h*D.
  friend VectorField operator*(const Poly& h, const VectorField& d) { return {h * d.p, h * d.q}; }

  friend bool operator==(const VectorField& a, const VectorField& b) = default;
};

/// D(h) = p h_x + q h_y.
inline Poly apply(const VectorField& d, const Poly& h) {
  return d.p * partial(h, Var::X) + d.q * partial(h, Var::Y);
}

inline VectorField vf_bracket(const VectorField& a, const VectorField& b) {
  return {apply(a, b.p) - apply(b, a.p), apply(a, b.q) - apply(b, a.q)};
}

inline Poly divergence(const VectorField& d) { return partial(d.p, Var::X) + partial(d.q, Var::Y); }

/// Coordinates of a field: (component, monomial), dx-part before dy-part.
struct FieldKey {
  std::uint8_t component = 0;
  Monomial m;

  friend constexpr bool operator==(FieldKey a, FieldKey b) = default;
  friend constexpr std::strong_ordering operator<=>(FieldKey a, FieldKey b) {
    if (auto c = a.component <=> b.component; c != 0) return c;
    return a.m <=> b.m;
  }
};

using FieldVector = SparseVector<FieldKey>;

inline FieldVector to_vector(const VectorField& d) {
  FieldVector v;
  for (const auto& [m, c] : d.p.terms()) v.emplace_hint(v.end(), FieldKey{0, m}, c);
  for (const auto& [m, c] : d.q.terms()) v.emplace_hint(v.end(), FieldKey{1, m}, c);
  return v;
}

inline VectorField from_vector(const FieldVector& v) {
  Poly::Terms p, q;
  for (const auto& [k, c] : v) (k.component == 0 ? p : q).emplace(k.m, c);
  return {Poly(std::move(p)), Poly(std::move(q))};
}

/// Text form "(p) dx + (q) dy".
inline std::string to_string(const VectorField& d) {
  return "(" + to_string(d.p) + ") dx + (" + to_string(d.q) + ") dy";
}

inline std::ostream& operator<<(std::ostream& os, const VectorField& d) { return os << to_string(d); }

inline VectorField parse_vector_field(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](std::string_view token) {
    skip_ws();
    if (text.substr(pos, token.size()) != token)
      throw ParseError(pos, "'" + std::string(token) + "'", text);
    pos += token.size();
  };
  auto component = [&] {
    expect("(");
    std::size_t close = text.find(')', pos);
    if (close == std::string_view::npos) throw ParseError(text.size(), "')'", text);
    Poly p = parse_poly(text.substr(pos, close - pos), pos, text);
    pos = close + 1;
    return p;
  };
  VectorField d;
  d.p = component();
  expect("dx");
  expect("+");
  d.q = component();
  expect("dy");
  skip_ws();
  if (pos != text.size()) throw ParseError(pos, "end of input", text);
  return d;
}

}  // namespace planelie
