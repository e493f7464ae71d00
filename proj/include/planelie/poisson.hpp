#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "planelie/linalg.hpp"
#include "planelie/poly.hpp"
#include "planelie/vector_field.hpp"

namespace planelie {

/// {f,g} = f_x g_y - f_y g_x.
inline Poly poisson_bracket(const Poly& f, const Poly& g) { return jacobian_det(f, g); }

/// The Hamiltonian field D_h = h_x dy - h_y dx.
inline VectorField mu(const Poly& h) { return {-partial(h, Var::Y), partial(h, Var::X)}; }

/// Inverse of mu on divergence-free fields, normalized to h(0,0) = 0.
inline Poly integrate_hamiltonian(const VectorField& d) {
  const Poly div = divergence(d);
  if (!div.is_zero())
    throw Error(ErrorCode::NonZeroDivergence, "divergence is " + to_string(div));
  // h_x = q, h_y = -p.
  Poly h;
  for (const auto& [m, c] : d.q.terms()) h.add_term({m.i + 1, m.j}, c / (m.i + 1));
  const Poly rest = -d.p - partial(h, Var::Y);
  for (const auto& [m, c] : rest.terms()) {
    if (m.i != 0) throw std::logic_error("integrate_hamiltonian: inconsistent partials");
    h.add_term({0, m.j + 1}, c / (m.j + 1));
  }
  return h;
}

/// A subspace of K[x,y] held as a reduced echelon basis over monomials. All
/// members have degree at most degree_cap.
class PolySubspace {
 public:
  static constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

  explicit PolySubspace(std::uint32_t degree_cap = kUnbounded) : degree_cap_(degree_cap) {}

  /// Adds p; returns false if it was already in the span.
  bool insert(const Poly& p) {
    if (p.degree().value_or(0) > degree_cap_)
      throw Error(ErrorCode::InvalidArgument,
                  "degree of " + to_string(p) + " exceeds cap " + std::to_string(degree_cap_));
    return echelon_.insert(p.terms());
  }

  bool contains(const Poly& p) const { return echelon_.contains(p.terms()); }
  Poly reduce(const Poly& p) const { return Poly(echelon_.reduce(p.terms())); }
  std::optional<ScalarVector> coordinates(const Poly& p) const {
    return echelon_.coordinates(p.terms());
  }

  std::size_t dim() const { return echelon_.dim(); }
  std::uint32_t degree_cap() const { return degree_cap_; }

  std::vector<Poly> basis() const {
    std::vector<Poly> out;
    for (const auto& row : echelon_.rows()) out.emplace_back(row);
    return out;
  }

  /// Same span (the cap is not compared).
  friend bool operator==(const PolySubspace& a, const PolySubspace& b) {
    return a.echelon_ == b.echelon_;
  }

 private:
  std::uint32_t degree_cap_;
  EchelonBasis<Monomial> echelon_;
};

inline std::vector<Monomial> monomials_upto(std::uint32_t d) {
  std::vector<Monomial> out;
  for (std::uint32_t n = 0; n <= d; ++n)
    for (std::uint32_t i = 0; i <= n; ++i) out.push_back({i, n - i});
  return out;
}

/// {h : deg h <= d and {h, f} = 0 for every f in fs}.
inline PolySubspace centralizer_upto(const std::vector<Poly>& fs, std::uint32_t d) {
  const auto unknowns = monomials_upto(d);
  // Columns are the images of the unknown monomials; rows are indexed by
  // (which f, monomial) pairs.
  std::map<std::pair<std::size_t, Monomial>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> columns(unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    const Poly m = Poly::monomial(1, unknowns[u].i, unknowns[u].j);
    for (std::size_t k = 0; k < fs.size(); ++k) {
      for (const Poly b = poisson_bracket(m, fs[k]); const auto& [mono, c] : b.terms()) {
        auto [it, fresh] = row_of.try_emplace({k, mono}, row_of.size());
        columns[u].emplace_back(it->second, c);
      }
    }
  }
  Matrix a(row_of.size(), unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (const auto& [r, c] : columns[u]) a(r, u) = c;

  PolySubspace out(d);
  for (const auto& v : nullspace(a)) {
    Poly h;
    for (std::size_t u = 0; u < unknowns.size(); ++u) h.add_term(unknowns[u], v[u]);
    out.insert(h);
  }
  return out;
}

enum class ClosureStatus { Closed, CapExceeded };

struct ClosureResult {
  PolySubspace span;
  ClosureStatus status = ClosureStatus::Closed;
  std::string detail;  // why the closure was truncated

  bool closed() const { return status == ClosureStatus::Closed; }
};

/// Bracket closure of the span of gens. Brackets above degree_cap are
/// dropped and growth stops at dim_cap; either event marks the result
/// CapExceeded and the span returned is the partial closure.
inline ClosureResult lie_closure(const std::vector<Poly>& gens, std::uint32_t degree_cap,
                                 std::size_t dim_cap) {
  if (degree_cap == 0 || dim_cap == 0)
    throw Error(ErrorCode::InvalidArgument, "closure caps must be positive");
  ClosureResult res{PolySubspace(degree_cap), ClosureStatus::Closed, {}};
  std::vector<Poly> members;
  std::size_t dropped = 0;

  // Returns false once the dimension cap stops the computation.
  auto offer = [&](const Poly& p) {
    if (p.is_zero()) return true;
    if (*p.degree() > degree_cap) {
      ++dropped;
      return true;
    }
    if (res.span.contains(p)) return true;
    if (res.span.dim() >= dim_cap) {
      res.status = ClosureStatus::CapExceeded;
      res.detail = "dimension cap " + std::to_string(dim_cap) + " reached";
      return false;
    }
    res.span.insert(p);
    members.push_back(p);
    return true;
  };

  for (const auto& g : gens)
    if (!offer(g)) return res;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!offer(poisson_bracket(members[i], members[j]))) return res;

  if (dropped > 0) {
    res.status = ClosureStatus::CapExceeded;
    res.detail = std::to_string(dropped) + " element(s) above degree cap " +
                 std::to_string(degree_cap) + " dropped";
  }
  return res;
}

/// <1, f, g, f^2, fg, g^2> for {f,g} a nonzero constant; checked to be a
/// subalgebra isomorphic to P_{<=2} via x -> f, y -> g/{f,g}.
inline PolySubspace p_fg_basis(const Poly& f, const Poly& g) {
  const Poly c = poisson_bracket(f, g);
  if (c.is_zero() || !c.is_constant())
    throw Error(ErrorCode::BracketNotConstant, "{f,g} = " + to_string(c));
  const Poly gn = g / c.constant_term();

  const std::vector<Poly> standard{1, Poly::x(), Poly::y(), pow(Poly::x(), 2),
                                   Poly::x() * Poly::y(), pow(Poly::y(), 2)};
  const std::vector<Poly> image{1, f, gn, f * f, f * gn, gn * gn};

  const std::uint32_t cap = 2 * std::max(f.degree().value_or(0), g.degree().value_or(0));
  PolySubspace out(cap);
  for (const auto& b : image) out.insert(b);
  if (out.dim() < 6)
    throw Error(ErrorCode::DegenerateSpan, "span has dimension " + std::to_string(out.dim()));

  PolySubspace std_span;
  for (const auto& s : standard) std_span.insert(s);
  // Transport each structure constant of P_{<=2} along the basis map.
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) {
      Poly expected;
      const Poly sb = poisson_bracket(standard[a], standard[b]);
      for (std::size_t k = 0; k < 6; ++k) {
        Scalar coeff = sb.coefficient(standard[k].leading_monomial());
        if (!is_zero(coeff)) expected += image[k] * coeff;
      }
      if (poisson_bracket(image[a], image[b]) != expected)
        throw std::logic_error("p_fg_basis: structure constants do not match P_{<=2}");
    }
  return out;
}

/// Multiplies the degree-n homogeneous part of h by t^(1-n).
inline Poly graded_rescale(const Scalar& t, const Poly& h) {
  if (is_zero(t)) throw Error(ErrorCode::ZeroScale, "scale must be nonzero");
  Poly out;
  for (const auto& [m, c] : h.terms())
    out.add_term(m, c * ipow(t, 1 - static_cast<long>(m.degree())));
  return out;
}

}  // namespace planelie
