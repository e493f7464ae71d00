#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "planelie/poly.hpp"
#include "planelie/vfield.hpp"

namespace planelie {

/// A polynomial endomorphism x -> f, y -> g of the plane.
struct PolyMap {
  Poly f;
  Poly g;

  static PolyMap identity() { return {Poly::x(), Poly::y()}; }

  friend bool operator==(const PolyMap& a, const PolyMap& b) = default;
};

inline std::string to_string(const PolyMap& m) { return to_string(m.f) + " ; " + to_string(m.g); }

inline std::ostream& operator<<(std::ostream& os, const PolyMap& m) { return os << to_string(m); }

/// Text form "f ; g".
inline PolyMap parse_poly_map(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw ParseError(text.size(), "';'", text);
  return {parse_poly(text.substr(0, semi), 0, text),
          parse_poly(text.substr(semi + 1), semi + 1, text)};
}

inline Poly compose(const Poly& p, const PolyMap& m) { return compose(p, m.f, m.g); }

/// (a o b) = (f_a(f_b, g_b), g_a(f_b, g_b)).
inline PolyMap compose_maps(const PolyMap& a, const PolyMap& b) {
  return {compose(a.f, b), compose(a.g, b)};
}

inline std::optional<EtaleMap> is_etale(const PolyMap& m) { return EtaleMap::make(m.f, m.g); }

inline PolyMap to_poly_map(const EtaleMap& a) { return {a.f(), a.g()}; }

/// (x, y) -> A (x, y) + b with A invertible.
struct AffineFactor {
  std::array<std::array<Scalar, 2>, 2> matrix{{{1, 0}, {0, 1}}};
  std::array<Scalar, 2> translation{0, 0};

  friend bool operator==(const AffineFactor&, const AffineFactor&) = default;
};

/// var == X: (x, y + p(x)); var == Y: (x + p(y), y). p is univariate in var.
struct TriangularFactor {
  Var var = Var::X;
  Poly p;

  friend bool operator==(const TriangularFactor&, const TriangularFactor&) = default;
};

using ElementaryFactor = std::variant<AffineFactor, TriangularFactor>;

inline PolyMap to_poly_map(const ElementaryFactor& factor) {
  if (const auto* a = std::get_if<AffineFactor>(&factor)) {
    const auto& m = a->matrix;
    return {m[0][0] * Poly::x() + m[0][1] * Poly::y() + Poly(a->translation[0]),
            m[1][0] * Poly::x() + m[1][1] * Poly::y() + Poly(a->translation[1])};
  }
  const auto& t = std::get<TriangularFactor>(factor);
  if (t.var == Var::X) return {Poly::x(), Poly::y() + t.p};
  return {Poly::x() + t.p, Poly::y()};
}

inline ElementaryFactor inverse(const ElementaryFactor& factor) {
  if (const auto* a = std::get_if<AffineFactor>(&factor)) {
    const auto& m = a->matrix;
    const Scalar det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    AffineFactor inv;
    inv.matrix = {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
    const auto& b = a->translation;
    inv.translation = {-(inv.matrix[0][0] * b[0] + inv.matrix[0][1] * b[1]),
                       -(inv.matrix[1][0] * b[0] + inv.matrix[1][1] * b[1])};
    return inv;
  }
  auto t = std::get<TriangularFactor>(factor);
  t.p = -t.p;
  return t;
}

/// (F_0 o F_1 o ... o F_{n-1}) reproduces the source map.
struct ElementaryFactorization {
  std::vector<ElementaryFactor> factors;

  PolyMap compose() const {
    PolyMap acc = PolyMap::identity();
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      acc = compose_maps(to_poly_map(*it), acc);
    return acc;
  }

  std::size_t triangular_count() const {
    std::size_t n = 0;
    for (const auto& f : factors) n += std::holds_alternative<TriangularFactor>(f);
    return n;
  }
};

enum class Verdict { Automorphism, NotAutomorphism, Stuck };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Automorphism: return "Automorphism";
    case Verdict::NotAutomorphism: return "NotAutomorphism";
    case Verdict::Stuck: return "Stuck";
  }
  return "?";
}

struct AutomorphismDecision {
  Verdict verdict = Verdict::NotAutomorphism;
  ElementaryFactorization factorization;  // set for Automorphism
  std::string reason;                     // set for NotAutomorphism and Stuck
  PolyMap state;                          // the map reduction stopped at
};

namespace detail {

/// If lead(target) = c * lead(by)^k with k = deg target / deg by, returns
/// the univariate term c * t^k to subtract as c * by^k.
inline std::optional<std::pair<Scalar, std::uint32_t>> reduction_step(const Poly& target,
                                                                      const Poly& by) {
  const std::uint32_t dt = *target.degree(), db = *by.degree();
  if (db == 0 || dt % db != 0) return std::nullopt;
  const std::uint32_t k = dt / db;
  const Poly lead_pow = pow(by.leading_form(), k);
  const Scalar c = target.leading_coefficient() / lead_pow.leading_coefficient();
  if (target.leading_form() != lead_pow * c) return std::nullopt;
  return std::pair{c, k};
}

inline void push_triangular(ElementaryFactorization& fac, Var var, const Poly& p) {
  if (!fac.factors.empty())
    if (auto* last = std::get_if<TriangularFactor>(&fac.factors.back()); last && last->var == var) {
      last->p += p;
      return;
    }
  fac.factors.push_back(TriangularFactor{var, p});
}

}  // namespace detail

/// Decides whether m is an automorphism by peeling degree-lowering triangular
/// factors off the outside until an affine map remains. The higher-degree
/// component is reduced; on a tie g is tried against f first. A Stuck result
/// on an etale map would contradict tameness and is reported as an anomaly.
inline AutomorphismDecision decide_automorphism(const PolyMap& m, std::uint32_t degree_cap) {
  AutomorphismDecision out;
  out.state = m;
  const Poly j = jacobian_det(m.f, m.g);
  if (j.is_zero() || !j.is_constant()) {
    out.reason = "not etale: Jacobian determinant is " + to_string(j);
    return out;
  }
  Poly f = m.f, g = m.g;
  while (true) {
    const std::uint32_t df = *f.degree(), dg = *g.degree();
    if (std::max(df, dg) > degree_cap)
      throw Error(ErrorCode::CapExceeded, "degree " + std::to_string(std::max(df, dg)) +
                                              " exceeds cap " + std::to_string(degree_cap));
    if (df <= 1 && dg <= 1) {
      AffineFactor a;
      a.matrix = {{{f.coefficient({1, 0}), f.coefficient({0, 1})},
                   {g.coefficient({1, 0}), g.coefficient({0, 1})}}};
      a.translation = {f.constant_term(), g.constant_term()};
      if (is_zero(a.matrix[0][0] * a.matrix[1][1] - a.matrix[0][1] * a.matrix[1][0])) {
        out.state = {f, g};
        out.reason = "affine part is singular";
        return out;
      }
      if (a != AffineFactor{} || out.factorization.factors.empty())
        out.factorization.factors.push_back(a);
      out.verdict = Verdict::Automorphism;
      out.state = {f, g};
      return out;
    }
    if (dg >= df) {
      if (auto step = detail::reduction_step(g, f)) {
        const auto [c, k] = *step;
        g -= pow(f, k) * c;
        detail::push_triangular(out.factorization, Var::X, Poly::monomial(c, k, 0));
        continue;
      }
    }
    if (df >= dg) {
      if (auto step = detail::reduction_step(f, g)) {
        const auto [c, k] = *step;
        f -= pow(g, k) * c;
        detail::push_triangular(out.factorization, Var::Y, Poly::monomial(c, 0, k));
        continue;
      }
    }
    out.verdict = Verdict::Stuck;
    out.state = {f, g};
    out.reason = "no degree-lowering elementary reduction applies to an etale map (anomaly)";
    return out;
  }
}

inline std::uint32_t max_degree(const PolyMap& m) {
  return std::max(m.f.degree().value_or(0), m.g.degree().value_or(0));
}

/// The composite of the inverted factors in reverse order.
inline PolyMap invert(const ElementaryFactorization& fac) {
  PolyMap acc = PolyMap::identity();
  for (const auto& factor : fac.factors) acc = compose_maps(to_poly_map(inverse(factor)), acc);
  return acc;
}

inline PolyMap invert(const PolyMap& m) {
  const AutomorphismDecision d = decide_automorphism(m, max_degree(m));
  if (d.verdict != Verdict::Automorphism)
    throw Error(ErrorCode::NotAnAutomorphism, to_string(m) + ": " + d.reason);
  return invert(d.factorization);
}

/// Composite degree ceiling used by random_automorphism unless overridden.
inline constexpr std::uint32_t kDefaultDegreeBudget = 12;

/// Deterministic random tame automorphism: an invertible affine map followed
/// by n_factors elementary factors, each affine or triangular in a random
/// variable with degree in [1, deg_bound] and small integer coefficients.
/// A factor degree is clamped so the product of factor degrees, an upper
/// bound for the composite degree, stays within degree_budget.
inline PolyMap random_automorphism(std::uint64_t seed, unsigned n_factors, unsigned deg_bound,
                                   std::uint32_t degree_budget = kDefaultDegreeBudget) {
  if (deg_bound == 0 || degree_budget == 0)
    throw Error(ErrorCode::InvalidArgument, "bounds must be positive");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto nonzero = [&] {
    long v = uniform(1, 2);
    return uniform(0, 1) ? v : -v;
  };
  auto random_affine = [&] {
    AffineFactor a;
    do {
      for (auto& row : a.matrix)
        for (auto& c : row) c = uniform(-2, 2);
    } while (is_zero(a.matrix[0][0] * a.matrix[1][1] - a.matrix[0][1] * a.matrix[1][0]));
    a.translation = {uniform(-2, 2), uniform(-2, 2)};
    return a;
  };

  PolyMap acc = to_poly_map(random_affine());
  std::uint32_t degree = 1;
  for (unsigned n = 0; n < n_factors; ++n) {
    if (uniform(0, 3) == 0) {
      acc = compose_maps(to_poly_map(random_affine()), acc);
      continue;
    }
    auto d = static_cast<std::uint32_t>(uniform(1, deg_bound));
    d = std::max<std::uint32_t>(1, std::min(d, degree_budget / degree));
    degree *= d;
    TriangularFactor t{uniform(0, 1) ? Var::X : Var::Y, {}};
    auto term = [&](const Scalar& c, std::uint32_t e) {
      return t.var == Var::X ? Poly::monomial(c, e, 0) : Poly::monomial(c, 0, e);
    };
    t.p += term(nonzero(), d);
    for (std::uint32_t e = 0; e < d; ++e)
      if (uniform(0, 2) == 0) t.p += term(nonzero(), e);
    acc = compose_maps(to_poly_map(t), acc);
  }
  return acc;
}

}  // namespace planelie
