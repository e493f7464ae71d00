#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planelie/error.hpp"
#include "planelie/scalar.hpp"

namespace planelie {

enum class Var { X, Y };

/// x^i * y^j. Ordered graded-lex with x > y: total degree first, then the
/// exponent of x.
struct Monomial {
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  constexpr std::uint32_t degree() const { return i + j; }

  friend constexpr bool operator==(Monomial a, Monomial b) = default;
  friend constexpr std::strong_ordering operator<=>(Monomial a, Monomial b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.i <=> b.i;
  }
};

constexpr Monomial operator*(Monomial a, Monomial b) { return {a.i + b.i, a.j + b.j}; }

/// Sparse polynomial in K[x,y] with exact rational coefficients. Zero
/// coefficients are never stored, so equality is structural.
class Poly {
 public:
  using Terms = std::map<Monomial, Scalar>;

  Poly() = default;
  Poly(long c) { add_term({0, 0}, Scalar(c)); }  // NOLINT: integer literals read as constants
  Poly(const Scalar& c) { add_term({0, 0}, c); }  // NOLINT
  explicit Poly(Terms terms) : terms_(std::move(terms)) { prune(); }

  static Poly x() { return monomial(1, 1, 0); }
  static Poly y() { return monomial(1, 0, 1); }
  static Poly monomial(const Scalar& c, std::uint32_t i, std::uint32_t j) {
    Poly p;
    p.add_term({i, j}, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Total degree; empty for the zero polynomial.
  std::optional<std::uint32_t> degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first.degree();
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
  }

  Scalar coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  Scalar constant_term() const { return coefficient({0, 0}); }

  /// Largest monomial in graded-lex order. Precondition: nonzero.
  Monomial leading_monomial() const { return terms_.rbegin()->first; }
  const Scalar& leading_coefficient() const { return terms_.rbegin()->second; }

  /// The part of total degree n.
  Poly homogeneous_part(std::uint32_t n) const {
    Poly out;
    for (const auto& [m, c] : terms_)
      if (m.degree() == n) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }

  /// Top-degree homogeneous part (zero for the zero polynomial).
  Poly leading_form() const {
    if (terms_.empty()) return {};
    return homogeneous_part(*degree());
  }

  void add_term(Monomial m, const Scalar& c) {
    if (planelie::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (planelie::is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) { return merge(o, 1); }
  Poly& operator-=(const Poly& o) { return merge(o, -1); }
  Poly& operator*=(const Scalar& s) {
    if (planelie::is_zero(s)) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }
  Poly& operator/=(const Scalar& s) { return *this *= Scalar(1) / s; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Scalar(-1); }
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
  friend Poly operator/(Poly a, const Scalar& s) { return a /= s; }

  friend inline Poly operator*(const Poly& a, const Poly& b);

  friend bool operator==(const Poly& a, const Poly& b) = default;

 private:
  // Linear-time merge of sorted term lists.
  Poly& merge(const Poly& o, int sign) {
    auto it = terms_.begin();
    for (const auto& [m, c] : o.terms_) {
      while (it != terms_.end() && it->first < m) ++it;
      if (it != terms_.end() && it->first == m) {
        if (sign > 0)
          it->second += c;
        else
          it->second -= c;
        it = planelie::is_zero(it->second) ? terms_.erase(it) : std::next(it);
      } else {
        terms_.emplace_hint(it, m, sign > 0 ? c : Scalar(-c));
      }
    }
    return *this;
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (planelie::is_zero(it->second))
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  Terms terms_;
};

namespace detail {

/// Coefficients scaled by the lcm of their denominators.
struct IntegerForm {
  std::vector<std::pair<Monomial, mpz_class>> terms;
  mpz_class denominator = 1;
  std::uint32_t max_i = 0, max_j = 0;
};

inline IntegerForm integer_form(const Poly& p) {
  IntegerForm out;
  for (const auto& [m, c] : p.terms()) {
    mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), c.get_den_mpz_t());
    out.max_i = std::max(out.max_i, m.i);
    out.max_j = std::max(out.max_j, m.j);
  }
  out.terms.reserve(p.terms().size());
  for (const auto& [m, c] : p.terms())
    out.terms.emplace_back(m, c.get_num() * (out.denominator / c.get_den()));
  return out;
}

inline std::size_t max_bits(const IntegerForm& a) {
  std::size_t bits = 0;
  for (const auto& [m, c] : a.terms) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

inline std::size_t count_bits(std::size_t n) {
  std::size_t bits = 1;
  while ((std::size_t(1) << bits) <= n) ++bits;
  return bits;
}

/// True when every coefficient fits in 63 bits and no accumulated sum can
/// overflow 127 bits.
inline bool word_sized(const IntegerForm& a, const IntegerForm& b) {
  const std::size_t ba = max_bits(a), bb = max_bits(b);
  return ba <= 62 && bb <= 62 &&
         ba + bb + count_bits(std::min(a.terms.size(), b.terms.size())) <= 126;
}

inline void word_multiply(const IntegerForm& a, const IntegerForm& b, std::size_t width,
                          std::vector<mpz_class>& acc) {
  using Wide = __int128;
  std::vector<std::pair<std::size_t, long>> wa, wb;
  for (const auto& [m, c] : a.terms) wa.emplace_back(m.i * width + m.j, c.get_si());
  for (const auto& [m, c] : b.terms) wb.emplace_back(m.i * width + m.j, c.get_si());
  std::vector<Wide> sums(acc.size(), 0);
  for (const auto& [ka, ca] : wa)
    for (const auto& [kb, cb] : wb) sums[ka + kb] += static_cast<Wide>(ca) * cb;
  for (std::size_t k = 0; k < sums.size(); ++k) {
    if (sums[k] == 0) continue;
    const bool negative = sums[k] < 0;
    const auto u = static_cast<unsigned __int128>(negative ? -sums[k] : sums[k]);
    mpz_ptr z = acc[k].get_mpz_t();
    mpz_set_ui(z, static_cast<unsigned long>(u >> 64));
    mpz_mul_2exp(z, z, 64);
    mpz_add_ui(z, z, static_cast<unsigned long>(u));
    if (negative) mpz_neg(z, z);
  }
}

}  // namespace detail

// Products are accumulated over the integers (no gcd per term), densely when
// the exponent box is not much larger than the number of term pairs.
inline Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const detail::IntegerForm ia = detail::integer_form(a), ib = detail::integer_form(b);
  const mpz_class den = ia.denominator * ib.denominator;
  const std::size_t width = ia.max_j + ib.max_j + 1;
  const std::size_t box = (ia.max_i + ib.max_i + 1) * width;
  const std::size_t pairs = ia.terms.size() * ib.terms.size();

  Poly::Terms out;
  auto emit = [&](Monomial m, const mpz_class& n) {
    if (n == 0) return;
    Scalar c(n, den);
    c.canonicalize();
    out.emplace_hint(out.end(), m, std::move(c));
  };
  if (box <= 4 * pairs + 1024) {
    std::vector<mpz_class> acc(box);
    if (detail::word_sized(ia, ib)) {
      detail::word_multiply(ia, ib, width, acc);
    } else {
      for (const auto& [ma, ca] : ia.terms)
        for (const auto& [mb, cb] : ib.terms)
          mpz_addmul(acc[(ma.i + mb.i) * width + ma.j + mb.j].get_mpz_t(), ca.get_mpz_t(),
                     cb.get_mpz_t());
    }
    std::vector<std::pair<Monomial, std::size_t>> order;
    for (std::size_t k = 0; k < box; ++k)
      if (acc[k] != 0)
        order.emplace_back(Monomial{static_cast<std::uint32_t>(k / width),
                                    static_cast<std::uint32_t>(k % width)},
                           k);
    std::sort(order.begin(), order.end());
    for (const auto& [m, k] : order) emit(m, acc[k]);
  } else {
    std::map<Monomial, mpz_class> acc;
    for (const auto& [ma, ca] : ia.terms)
      for (const auto& [mb, cb] : ib.terms)
        mpz_addmul(acc[ma * mb].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    for (const auto& [m, n] : acc) emit(m, n);
  }
  return Poly(std::move(out));
}

inline Poly pow(const Poly& p, long e) {
  if (e < 0) throw Error(ErrorCode::NegativeExponent, "exponent " + std::to_string(e));
  Poly acc = 1;
  Poly base = p;
  while (e) {
    if (e & 1L) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

inline Poly partial(const Poly& p, Var v) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (v == Var::X && m.i > 0) out.add_term({m.i - 1, m.j}, c * m.i);
    if (v == Var::Y && m.j > 0) out.add_term({m.i, m.j - 1}, c * m.j);
  }
  return out;
}

/// f_x g_y - f_y g_x.
inline Poly jacobian_det(const Poly& f, const Poly& g) {
  return partial(f, Var::X) * partial(g, Var::Y) - partial(f, Var::Y) * partial(g, Var::X);
}

namespace detail {

/// Dense integer coefficients over the square exponent box of side `side`.
using DenseInt = std::vector<mpz_class>;
using SparseInt = std::vector<std::pair<std::size_t, mpz_class>>;

inline SparseInt sparse_of(const IntegerForm& a, std::size_t side) {
  SparseInt out;
  for (const auto& [m, c] : a.terms) out.emplace_back(m.i * side + m.j, c);
  return out;
}

inline SparseInt sparse_of(const DenseInt& a) {
  SparseInt out;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0) out.emplace_back(k, a[k]);
  return out;
}

inline void add_product(DenseInt& acc, const SparseInt& a, const SparseInt& b) {
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) mpz_addmul(acc[ka + kb].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
}

}  // namespace detail

/// Substitution p(f, g).
///
/// With f = F/df, g = G/dg and p integral after scaling, the result times
/// df^I dg^J is sum_i F^i df^(I-i) Q_i with Q_i = sum_j c_ij G^j dg^(J-j), which
/// Horner evaluates without leaving the integers.
inline Poly compose(const Poly& p, const Poly& f, const Poly& g) {
  if (p.is_zero()) return {};
  const detail::IntegerForm ip = detail::integer_form(p);
  const detail::IntegerForm fi = detail::integer_form(f), gi = detail::integer_form(g);
  const std::uint32_t deg_f = f.degree().value_or(0), deg_g = g.degree().value_or(0);
  const std::uint32_t top_i = ip.max_i, top_j = ip.max_j;
  std::size_t bound = 0;
  for (const auto& [m, c] : ip.terms) bound = std::max<std::size_t>(bound, m.i * deg_f + m.j * deg_g);
  const std::size_t side = bound + 1, box = side * side;

  const detail::SparseInt sf = detail::sparse_of(fi, side), sg = detail::sparse_of(gi, side);
  std::vector<mpz_class> df_pow{1}, dg_pow{1};
  for (std::uint32_t k = 0; k < top_i; ++k) df_pow.push_back(df_pow.back() * fi.denominator);
  for (std::uint32_t k = 0; k < top_j; ++k) dg_pow.push_back(dg_pow.back() * gi.denominator);

  std::vector<detail::SparseInt> g_pows{{{0, mpz_class(1)}}};
  for (std::uint32_t k = 1; k <= top_j; ++k) {
    detail::DenseInt next(box);
    detail::add_product(next, g_pows.back(), sg);
    g_pows.push_back(detail::sparse_of(next));
  }

  std::vector<std::vector<std::pair<std::uint32_t, const mpz_class*>>> rows(top_i + 1);
  for (const auto& [m, c] : ip.terms) rows[m.i].emplace_back(m.j, &c);
  // acc += df^(I-i) Q_i
  auto add_row = [&](detail::DenseInt& acc, std::uint32_t i) {
    for (const auto& [j, c] : rows[i]) {
      const mpz_class scale = *c * df_pow[top_i - i] * dg_pow[top_j - j];
      for (const auto& [k, v] : g_pows[j]) mpz_addmul(acc[k].get_mpz_t(), scale.get_mpz_t(), v.get_mpz_t());
    }
  };

  detail::DenseInt acc(box);
  add_row(acc, top_i);
  for (std::uint32_t i = top_i; i-- > 0;) {
    const detail::SparseInt prev = detail::sparse_of(acc);
    acc.assign(box, 0);
    detail::add_product(acc, prev, sf);
    add_row(acc, i);
  }

  const mpz_class den = ip.denominator * df_pow[top_i] * dg_pow[top_j];
  Poly::Terms out;
  for (std::size_t k = 0; k < box; ++k) {
    if (acc[k] == 0) continue;
    Scalar c(acc[k], den);
    c.canonicalize();
    out.emplace(Monomial{static_cast<std::uint32_t>(k / side), static_cast<std::uint32_t>(k % side)},
                std::move(c));
  }
  return Poly(std::move(out));
}

// ---------------------------------------------------------------------------
// Text form: terms c*x^i*y^j joined by + and -, c an integer or n/d.

namespace detail {

inline void append_monomial(std::string& s, Monomial m) {
  auto var = [&s](char name, std::uint32_t e) {
    if (e == 0) return;
    if (!s.empty() && s.back() != ' ' && s.back() != '-') s += '*';
    s += name;
    if (e > 1) s += '^' + std::to_string(e);
  };
  var('x', m.i);
  var('y', m.j);
}

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t offset, std::string_view whole)
      : text_(text), offset_(offset), whole_(whole) {}

  Poly parse() {
    skip_ws();
    if (at_end()) fail("polynomial");
    Poly out;
    bool first = true;
    while (true) {
      skip_ws();
      Scalar sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("'+' or '-'");
      }
      auto [m, c] = parse_term();
      out.add_term(m, sign * c);
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    return out;
  }

 private:
  std::pair<Monomial, Scalar> parse_term() {
    Monomial m;
    Scalar c = 1;
    while (true) {
      skip_ws();
      char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        mpz_class num = parse_integer();
        mpz_class den = 1;
        skip_ws();
        if (peek() == '/') {
          ++pos_;
          skip_ws();
          if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("denominator");
          std::size_t at = pos_;
          den = parse_integer();
          if (den == 0) {
            pos_ = at;
            fail("nonzero denominator");
          }
        }
        c *= make_scalar(num, den);
      } else if (ch == 'x' || ch == 'y') {
        ++pos_;
        std::uint32_t e = 1;
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          skip_ws();
          if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent");
          mpz_class big = parse_integer();
          if (big > 100000) fail("exponent at most 100000");
          e = static_cast<std::uint32_t>(big.get_ui());
        }
        (ch == 'x' ? m.i : m.j) += e;
      } else {
        fail("number or variable");
      }
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
    }
    return {m, c};
  }

  mpz_class parse_integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(offset_ + pos_, expected, whole_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t offset_;
  std::string_view whole_;
};

}  // namespace detail

/// Canonical text: graded-lex descending, coefficients as n/d, unit
/// coefficients omitted on non-constant terms.
inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) s += '-';
    } else {
      s += negative ? " - " : " + ";
    }
    first = false;
    Scalar mag = abs(c);
    if (m == Monomial{}) {
      s += mag.get_str();
    } else {
      if (mag != 1) s += mag.get_str();
      detail::append_monomial(s, m);
    }
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << to_string(p); }

/// Parses the text form. `offset` shifts reported positions when the text is
/// embedded in a larger input.
inline Poly parse_poly(std::string_view text, std::size_t offset = 0,
                       std::string_view whole = {}) {
  return detail::PolyParser(text, offset, whole.empty() ? text : whole).parse();
}

}  // namespace planelie
