#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planelie/linalg.hpp"
#include "planelie/poisson.hpp"
#include "planelie/vector_field.hpp"
#include "planelie/vfield.hpp"

namespace planelie {

/// A finite-dimensional span of vector fields, kept as a reduced echelon
/// basis over (component, monomial) coordinates. Equal spans compare equal.
class VFSubspace {
 public:
  bool insert(const VectorField& d) {
    if (!echelon_.insert(to_vector(d))) return false;
    degree_cap_ = std::max(degree_cap_, d.degree().value_or(0));
    return true;
  }

  bool contains(const VectorField& d) const { return echelon_.contains(to_vector(d)); }
  std::optional<ScalarVector> coordinates(const VectorField& d) const {
    return echelon_.coordinates(to_vector(d));
  }

  std::size_t dim() const { return echelon_.dim(); }
  /// Largest degree among the inserted fields.
  std::uint32_t degree_cap() const { return degree_cap_; }

  std::vector<VectorField> basis() const {
    std::vector<VectorField> out;
    for (const auto& row : echelon_.rows()) out.push_back(from_vector(row));
    return out;
  }

  friend bool operator==(const VFSubspace& a, const VFSubspace& b) {
    return a.echelon_ == b.echelon_;
  }

 private:
  EchelonBasis<FieldKey> echelon_;
  std::uint32_t degree_cap_ = 0;
};

inline VFSubspace span_reduce(const std::vector<VectorField>& fields) {
  VFSubspace s;
  for (const auto& d : fields) s.insert(d);
  return s;
}

/// Structure constants of a closed span: [e_i, e_j] = sum_k c[i][j][k] e_k,
/// plus the Killing form kappa(x, y) = tr(ad x ad y) on the basis.
struct LiePresentation {
  VFSubspace space;
  std::vector<VectorField> basis;
  std::vector<std::vector<ScalarVector>> c;
  Matrix killing;

  std::size_t dim() const { return basis.size(); }

  ScalarVector bracket(const ScalarVector& a, const ScalarVector& b) const {
    ScalarVector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (is_zero(b[j])) continue;
        const Scalar ab = a[i] * b[j];
        for (std::size_t k = 0; k < dim(); ++k) out[k] += ab * c[i][j][k];
      }
    }
    return out;
  }

  /// Matrix of ad(a); column j holds [a, e_j].
  Matrix ad(const ScalarVector& a) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      const ScalarVector col = bracket(a, unit(j));
      for (std::size_t k = 0; k < dim(); ++k) m(k, j) = col[k];
    }
    return m;
  }

  ScalarVector unit(std::size_t i) const {
    ScalarVector u(dim());
    u[i] = 1;
    return u;
  }

  VectorField field(const ScalarVector& a) const {
    VectorField out;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!is_zero(a[i])) out += a[i] * basis[i];
    return out;
  }

  ScalarVector coords(const VectorField& d) const {
    auto co = space.coordinates(d);
    if (!co) throw Error(ErrorCode::InvalidArgument, to_string(d) + " is outside the span");
    return *co;
  }
};

/// Raised when a span is not bracket-closed; carries the offending pair.
class NotClosed : public Error {
 public:
  NotClosed(std::size_t i, std::size_t j, VectorField bracket)
      : Error(ErrorCode::NotClosed, "[e" + std::to_string(i) + ", e" + std::to_string(j) +
                                        "] = " + to_string(bracket) + " is outside the span"),
        i_(i),
        j_(j),
        bracket_(std::move(bracket)) {}

  std::size_t i() const { return i_; }
  std::size_t j() const { return j_; }
  const VectorField& bracket() const { return bracket_; }

 private:
  std::size_t i_, j_;
  VectorField bracket_;
};

inline LiePresentation structure_constants(const VFSubspace& s) {
  LiePresentation lp;
  lp.space = s;
  lp.basis = s.basis();
  const std::size_t n = lp.basis.size();
  lp.c.assign(n, std::vector<ScalarVector>(n, ScalarVector(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField b = vf_bracket(lp.basis[i], lp.basis[j]);
      auto co = s.coordinates(b);
      if (!co) throw NotClosed(i, j, std::move(b));
      lp.c[i][j] = *co;
      for (std::size_t k = 0; k < n; ++k) lp.c[j][i][k] = -(*co)[k];
    }
  std::vector<Matrix> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(lp.ad(lp.unit(i)));
  lp.killing = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Scalar t = (ads[i] * ads[j]).trace();
      lp.killing(i, j) = t;
      lp.killing(j, i) = t;
    }
  return lp;
}

// ---------------------------------------------------------------------------
// Subspaces in coordinates: reduced row bases over the presentation basis.

namespace detail {

using CoordBasis = std::vector<ScalarVector>;

inline CoordBasis bracket_span(const LiePresentation& lp, const CoordBasis& a,
                               const CoordBasis& b) {
  CoordBasis all;
  for (const auto& u : a)
    for (const auto& v : b) all.push_back(lp.bracket(u, v));
  return span_basis(all, lp.dim());
}

inline std::vector<VectorField> to_fields(const LiePresentation& lp, const CoordBasis& b) {
  std::vector<VectorField> out;
  for (const auto& v : b) out.push_back(lp.field(v));
  return out;
}

inline CoordBasis full_basis(const LiePresentation& lp) {
  CoordBasis out;
  for (std::size_t i = 0; i < lp.dim(); ++i) out.push_back(lp.unit(i));
  return out;
}

inline CoordBasis derived_coords(const LiePresentation& lp) {
  const CoordBasis all = full_basis(lp);
  return bracket_span(lp, all, all);
}

inline bool is_solvable(const LiePresentation& lp, CoordBasis s) {
  while (!s.empty()) {
    CoordBasis next = bracket_span(lp, s, s);
    if (next.size() == s.size()) return false;
    s = std::move(next);
  }
  return true;
}

/// Killing-orthogonal complement of the derived algebra.
inline CoordBasis radical_coords(const LiePresentation& lp) {
  const CoordBasis d = derived_coords(lp);
  if (d.empty()) return full_basis(lp);
  Matrix m = Matrix::from_rows(d, lp.dim()) * lp.killing;
  CoordBasis rad = span_basis(nullspace(m), lp.dim());
  if (!is_solvable(lp, rad)) throw std::logic_error("radical: orthogonal complement not solvable");
  return rad;
}

/// Coordinates of v relative to the rows of b (v assumed in their span).
inline std::optional<ScalarVector> coords_in(const CoordBasis& b, const ScalarVector& v,
                                             std::size_t dim) {
  return solve(Matrix::from_rows(b, dim).transpose(), v);
}

}  // namespace detail

/// [L, L] as fields.
inline std::vector<VectorField> derived(const LiePresentation& lp) {
  return detail::to_fields(lp, detail::derived_coords(lp));
}

/// The solvable radical, computed as the Killing-orthogonal complement of
/// [L, L] (valid in characteristic zero).
inline std::vector<VectorField> radical(const LiePresentation& lp) {
  return detail::to_fields(lp, detail::radical_coords(lp));
}

struct Sl2Triple {
  ScalarVector e, h, f;  // coordinates in the presentation basis
  VectorField e_field, h_field, f_field;
};

struct Sl2Search {
  std::optional<Sl2Triple> triple;
  bool structural_failure = false;  // Killing form degenerate: not semisimple
  int coefficient_bound = 0;
  std::size_t candidates_tried = 0;
  std::string reason;
};

namespace detail {

inline bool is_nilpotent(const Matrix& m) {
  Matrix p = m;
  for (std::size_t k = 1; k < m.rows(); ++k) p = p * m;
  return p.is_zero();
}

inline bool is_triple(const LiePresentation& lp, const ScalarVector& e, const ScalarVector& h,
                      const ScalarVector& f) {
  auto scaled = [](ScalarVector v, const Scalar& s) {
    for (auto& c : v) c *= s;
    return v;
  };
  return lp.bracket(h, e) == scaled(e, 2) && lp.bracket(h, f) == scaled(f, -2) &&
         lp.bracket(e, f) == h;
}

/// Given an ad-nilpotent e, picks h in [e, L] with [h, e] = 2e, then solves
/// the linear system [e, f] = h, [h, f] = -2f.
inline std::optional<Sl2Triple> complete_triple(const LiePresentation& lp, const ScalarVector& e) {
  const std::size_t n = lp.dim();
  const Matrix ade = lp.ad(e);
  if (ade.is_zero() || !is_nilpotent(ade)) return std::nullopt;
  ScalarVector two_e = e;
  for (auto& c : two_e) c *= 2;
  auto z = solve(Scalar(-1) * (ade * ade), two_e);
  if (!z) return std::nullopt;
  const ScalarVector h = ade * *z;
  const Matrix adh = lp.ad(h);
  Matrix sys(2 * n, n);
  ScalarVector rhs(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sys(i, j) = ade(i, j);
      sys(n + i, j) = adh(i, j) + (i == j ? 2 : 0);
    }
    rhs[i] = h[i];
  }
  auto f = solve(sys, rhs);
  if (!f || !is_triple(lp, e, h, *f)) return std::nullopt;
  return Sl2Triple{e, h, *f, lp.field(e), lp.field(h), lp.field(*f)};
}

/// Integer vectors in [-bound, bound]^n up to sign, by increasing max norm
/// and support size; the basis vectors come first.
inline std::vector<std::vector<long>> candidate_vectors(std::size_t n, int bound) {
  std::vector<std::vector<long>> out;
  for (int norm = 1; norm <= bound; ++norm)
    for (std::size_t support = 1; support <= n; ++support) {
      std::vector<long> v(n, -norm);
      while (true) {
        std::size_t nz = 0;
        long max_abs = 0, first = 0;
        for (long c : v) {
          if (c != 0) {
            ++nz;
            if (first == 0) first = c;
          }
          max_abs = std::max(max_abs, std::labs(c));
        }
        if (nz == support && max_abs == norm && first > 0) out.push_back(v);
        std::size_t k = n;
        while (k > 0 && v[k - 1] == norm) v[--k] = -norm;
        if (k == 0) break;
        ++v[k - 1];
      }
    }
  return out;
}

}  // namespace detail

/// Searches for an sl2-triple in a 3-dimensional presentation: an
/// ad-nilpotent e among small integer combinations of the basis, completed
/// by exact linear solves.
inline Sl2Search find_sl2_triple(const LiePresentation& lp, int coefficient_bound = 2) {
  if (lp.dim() != 3)
    throw Error(ErrorCode::InvalidArgument,
                "find_sl2_triple needs dimension 3, got " + std::to_string(lp.dim()));
  Sl2Search out;
  out.coefficient_bound = coefficient_bound;
  if (is_zero(determinant(lp.killing))) {
    out.structural_failure = true;
    out.reason = "Killing form is degenerate, so the algebra is not semisimple";
    return out;
  }
  for (const auto& cand : detail::candidate_vectors(3, coefficient_bound)) {
    ++out.candidates_tried;
    ScalarVector e(cand.begin(), cand.end());
    if (auto t = detail::complete_triple(lp, e)) {
      out.triple = std::move(t);
      return out;
    }
  }
  out.reason = "no rational sl2-triple with e among integer combinations of coefficient at most " +
               std::to_string(coefficient_bound) + " (" + std::to_string(out.candidates_tried) +
               " candidates)";
  return out;
}

/// Integrates a radical basis (D_f, D_g) to an etale map. The pair is
/// normalized within span<f, g>: f is the echelon member with the larger
/// leading monomial and g is rescaled so that {f, g} = 1.
inline EtaleMap recover_etale(const VFSubspace& l, const std::vector<VectorField>& radical_basis) {
  if (radical_basis.size() != 2)
    throw Error(ErrorCode::InvalidArgument,
                "radical basis must have 2 fields, got " + std::to_string(radical_basis.size()));
  if (l.dim() > 0)
    for (const auto& r : radical_basis)
      if (!l.contains(r)) throw Error(ErrorCode::InvalidArgument, to_string(r) + " is not in L");
  const Poly f0 = integrate_hamiltonian(radical_basis[0]);
  const Poly g0 = integrate_hamiltonian(radical_basis[1]);
  const Poly c = poisson_bracket(f0, g0);
  if (c.is_zero() || !c.is_constant())
    throw Error(ErrorCode::BracketNotConstant, "{" + to_string(f0) + ", " + to_string(g0) +
                                                   "} = " + to_string(c));
  PolySubspace span;
  span.insert(f0);
  span.insert(g0);
  const auto rows = span.basis();  // ascending leading monomials
  const Poly& f = rows[1];
  const Poly& u = rows[0];
  const Poly g = u / poisson_bracket(f, u).constant_term();
  auto m = EtaleMap::make(f, g);
  if (!m || m->jac() != 1) throw std::logic_error("recover_etale: normalization failed");
  return *m;
}

enum class TypeTag { Sl2, Saff2, Aff2, Other };

inline std::string_view to_string(TypeTag t) {
  switch (t) {
    case TypeTag::Sl2: return "Sl2";
    case TypeTag::Saff2: return "Saff2";
    case TypeTag::Aff2: return "Aff2";
    case TypeTag::Other: return "Other";
  }
  return "?";
}

struct ClassificationReport {
  bool closed = false;
  std::size_t dim = 0;
  std::vector<VectorField> radical_basis;
  std::vector<VectorField> levi_basis;
  TypeTag type_tag = TypeTag::Other;
  std::optional<EtaleMap> recovered_map;
  std::vector<std::string> diagnostics;
};

namespace detail {

struct SaffStructure {
  CoordBasis radical;  // 2 rows
  Sl2Triple triple;    // spans a Levi factor
  EtaleMap map = EtaleMap::identity();
};

/// A Levi factor for an abelian radical: a linear section s of L -> L/R,
/// corrected by a map phi: L/R -> R so that s + phi is a homomorphism.
inline std::optional<CoordBasis> levi_factor(const LiePresentation& lp, const CoordBasis& rad) {
  const std::size_t n = lp.dim(), r = rad.size(), q = n - r;
  // Complement of R spanned by unit vectors.
  CoordBasis comp;
  {
    CoordBasis acc = rad;
    for (std::size_t i = 0; i < n && comp.size() < q; ++i) {
      CoordBasis trial = acc;
      trial.push_back(lp.unit(i));
      if (rank(Matrix::from_rows(trial, n)) == trial.size()) {
        acc = trial;
        comp.push_back(lp.unit(i));
      }
    }
  }
  CoordBasis full = comp;
  full.insert(full.end(), rad.begin(), rad.end());
  const Matrix to_split = Matrix::from_rows(full, n).transpose();
  // Splits v into (complement part, radical part) coefficients.
  auto split = [&](const ScalarVector& v) { return *solve(to_split, v); };

  // Unknown phi[a][t]: phi(comp_a) = sum_t phi[a][t] rad_t, flattened a*r + t.
  // For a < b, R-part of [c_a, c_b] + [c_a, phi_b] - [c_b, phi_a]
  // - sum_d gamma_ab^d phi_d = 0.
  std::vector<ScalarVector> eq_rows;
  ScalarVector rhs;
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b) {
      const ScalarVector cab = split(lp.bracket(comp[a], comp[b]));
      std::vector<ScalarVector> coef(r, ScalarVector(q * r));
      for (std::size_t t = 0; t < r; ++t) {
        const ScalarVector ca_rt = split(lp.bracket(comp[a], rad[t]));
        const ScalarVector cb_rt = split(lp.bracket(comp[b], rad[t]));
        for (std::size_t s = 0; s < r; ++s) {
          coef[s][b * r + t] += ca_rt[q + s];
          coef[s][a * r + t] -= cb_rt[q + s];
        }
      }
      for (std::size_t d = 0; d < q; ++d)
        for (std::size_t s = 0; s < r; ++s) coef[s][d * r + s] -= cab[d];
      for (std::size_t s = 0; s < r; ++s) {
        eq_rows.push_back(coef[s]);
        rhs.push_back(-cab[q + s]);
      }
    }
  ScalarVector phi(q * r);
  if (!eq_rows.empty()) {
    auto sol = solve(Matrix::from_rows(eq_rows, q * r), rhs);
    if (!sol) return std::nullopt;
    phi = *sol;
  }
  CoordBasis levi;
  for (std::size_t a = 0; a < q; ++a) {
    ScalarVector v = comp[a];
    for (std::size_t t = 0; t < r; ++t)
      for (std::size_t k = 0; k < n; ++k) v[k] += phi[a * r + t] * rad[t][k];
    levi.push_back(std::move(v));
  }
  return levi;
}

inline std::optional<SaffStructure> analyze_saff2(const LiePresentation& lp,
                                                  std::vector<std::string>& diag) {
  const std::size_t n = lp.dim();
  if (n != 5) {
    diag.push_back("dimension " + std::to_string(n) + " is not 5");
    return std::nullopt;
  }
  for (const auto& d : lp.basis)
    if (!divergence(d).is_zero()) {
      diag.push_back("member " + to_string(d) + " has nonzero divergence; saff2 has no characters");
      return std::nullopt;
    }
  const CoordBasis rad = radical_coords(lp);
  if (rad.size() != 2) {
    diag.push_back("radical has dimension " + std::to_string(rad.size()) + ", expected 2");
    return std::nullopt;
  }
  if (lp.bracket(rad[0], rad[1]) != ScalarVector(n)) {
    diag.push_back("radical is not abelian");
    return std::nullopt;
  }
  auto levi = levi_factor(lp, rad);
  if (!levi) {
    diag.push_back("no Levi factor found");
    return std::nullopt;
  }
  // Action of the Levi factor on the radical, in the radical's basis.
  auto rho = [&](const ScalarVector& x) {
    Matrix m(2, 2);
    for (std::size_t t = 0; t < 2; ++t) {
      auto co = coords_in(rad, lp.bracket(x, rad[t]), n);
      if (!co) throw std::logic_error("radical is not an ideal");
      m(0, t) = (*co)[0];
      m(1, t) = (*co)[1];
    }
    return m;
  };
  // Columns: flattened rho(levi_a); solve rho(x) = target for x in the Levi.
  Matrix rep(4, 3);
  for (std::size_t a = 0; a < 3; ++a) {
    const Matrix m = rho((*levi)[a]);
    if (!is_zero(m.trace())) {
      diag.push_back("Levi factor acts on the radical with nonzero trace");
      return std::nullopt;
    }
    for (std::size_t k = 0; k < 4; ++k) rep(k, a) = m(k / 2, k % 2);
  }
  if (rank(rep) != 3) {
    diag.push_back("radical is not a simple 2-dimensional module of the Levi factor");
    return std::nullopt;
  }
  auto preimage = [&](const ScalarVector& target) -> std::optional<ScalarVector> {
    auto x = solve(rep, target);
    if (!x) return std::nullopt;
    ScalarVector v(n);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t k = 0; k < n; ++k) v[k] += (*x)[a] * (*levi)[a][k];
    return v;
  };
  // e -> [[0,1],[0,0]], h -> diag(1,-1), f -> [[0,0],[1,0]] (row-major).
  auto e = preimage({0, 1, 0, 0});
  auto h = preimage({1, 0, 0, -1});
  auto f = preimage({0, 0, 1, 0});
  if (!e || !h || !f || !is_triple(lp, *e, *h, *f)) {
    diag.push_back("Levi factor has no sl2-triple matching the radical action");
    return std::nullopt;
  }

  // Poisson-level checks on Q = mu^{-1}(L) = <1, H_1, ..., H_5>: the center
  // is exactly K, and the radical lifts V2 satisfy {V2, V2} = K.
  std::vector<Poly> lifts;
  for (const auto& d : lp.basis) lifts.push_back(integrate_hamiltonian(d));
  {
    std::map<std::pair<std::size_t, Monomial>, std::size_t> row_of;
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const Poly b = poisson_bracket(lifts[i], lifts[j]); const auto& [m, c] : b.terms()) {
          auto [it, fresh] = row_of.try_emplace({j, m}, row_of.size());
          cols[i].emplace_back(it->second, c);
        }
    Matrix a(row_of.size(), n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [rr, c] : cols[i]) a(rr, i) = c;
    if (!nullspace(a).empty()) {
      diag.push_back("center of the Poisson lift is larger than the constants");
      return std::nullopt;
    }
  }
  const Poly v0 = integrate_hamiltonian(lp.field(rad[0]));
  const Poly v1 = integrate_hamiltonian(lp.field(rad[1]));
  const Poly c = poisson_bracket(v0, v1);
  if (c.is_zero() || !c.is_constant()) {
    diag.push_back("bracket of the radical lifts is " + to_string(c) + ", not a nonzero constant");
    return std::nullopt;
  }

  SaffStructure out{rad, Sl2Triple{*e, *h, *f, lp.field(*e), lp.field(*h), lp.field(*f)},
                    EtaleMap::identity()};
  out.map = recover_etale(lp.space, to_fields(lp, rad));
  if (span_reduce(alpha_image(out.map, AlgebraKind::Saff2)) != lp.space) {
    diag.push_back("alpha_image of the recovered map does not reproduce the span");
    return std::nullopt;
  }
  return out;
}

inline void classify_sl2(const LiePresentation& lp, ClassificationReport& rep) {
  if (derived_coords(lp).size() != 3) {
    rep.diagnostics.push_back("not perfect: [L,L] is a proper subspace");
    return;
  }
  const Sl2Search search = find_sl2_triple(lp);
  if (!search.triple) {
    rep.diagnostics.push_back(search.reason);
    return;
  }
  rep.type_tag = TypeTag::Sl2;
  rep.levi_basis = {search.triple->e_field, search.triple->h_field, search.triple->f_field};
  if (lp.space == span_reduce(standard_basis(AlgebraKind::Sl2)))
    rep.diagnostics.push_back("span equals the standard sl2 <x dy, y dx, x dx - y dy>");
  else
    rep.diagnostics.push_back(
        "span is NOT equal to the standard sl2 <x dy, y dx, x dx - y dy>; conjugacy is not "
        "implied by the isomorphism");
}

inline void classify_saff2(const LiePresentation& lp, ClassificationReport& rep) {
  auto s = analyze_saff2(lp, rep.diagnostics);
  if (!s) return;
  rep.type_tag = TypeTag::Saff2;
  rep.radical_basis = to_fields(lp, s->radical);
  rep.levi_basis = {s->triple.e_field, s->triple.h_field, s->triple.f_field};
  rep.recovered_map = s->map;
}

inline void classify_aff2(const LiePresentation& lp, ClassificationReport& rep) {
  const CoordBasis dcoords = derived_coords(lp);
  if (dcoords.size() != 5) {
    rep.diagnostics.push_back("[M,M] has dimension " + std::to_string(dcoords.size()) +
                              ", expected 5");
    return;
  }
  const LiePresentation dlp = structure_constants(span_reduce(to_fields(lp, dcoords)));
  auto s = analyze_saff2(dlp, rep.diagnostics);
  if (!s) {
    rep.diagnostics.push_back("[M,M] is not of type saff2");
    return;
  }
  // Euler element: commutes with the Levi factor, acts as -1 on the radical.
  const std::size_t n = lp.dim();
  std::vector<ScalarVector> sys_rows;
  ScalarVector rhs;
  auto add_condition = [&](const VectorField& t, const Scalar& eigen) {
    const ScalarVector tc = lp.coords(t);
    const Matrix adt = lp.ad(tc);
    // [D, t] = -ad(t) D = eigen * t
    for (std::size_t k = 0; k < n; ++k) {
      ScalarVector row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = -adt(k, j);
      sys_rows.push_back(std::move(row));
      rhs.push_back(eigen * tc[k]);
    }
  };
  for (const auto* t : {&s->triple.e_field, &s->triple.h_field, &s->triple.f_field})
    add_condition(*t, 0);
  const auto rad_fields = to_fields(dlp, s->radical);
  for (const auto& r : rad_fields) add_condition(r, -1);
  auto dsol = solve(Matrix::from_rows(sys_rows, n), rhs);
  if (!dsol) {
    rep.diagnostics.push_back("no Euler element acting as -1 on the radical of [M,M]");
    return;
  }
  const VectorField euler = lp.field(*dsol);
  const Poly div = divergence(euler);
  if (div.is_zero() || !div.is_constant()) {
    rep.diagnostics.push_back("Euler element has divergence " + to_string(div));
    return;
  }
  // The Euler element depends on the Levi factor, so it matches the
  // transported Euler field g D_f - f D_g only modulo the radical.
  const EtaleMap& a = s->map;
  const VectorField expected = a.g() * mu(a.f()) - a.f() * mu(a.g());
  VFSubspace rad_span = span_reduce(rad_fields);
  if (rad_span.insert(euler - expected)) {
    rep.diagnostics.push_back("Euler element differs from the transported Euler field modulo the radical");
    return;
  }
  if (span_reduce(alpha_image(a, AlgebraKind::Aff2)) != lp.space) {
    rep.diagnostics.push_back("alpha_image of the recovered map does not reproduce the span");
    return;
  }
  rep.type_tag = TypeTag::Aff2;
  rep.radical_basis = rad_fields;
  rep.levi_basis = {s->triple.e_field, s->triple.h_field, s->triple.f_field};
  rep.recovered_map = a;
  rep.diagnostics.push_back("Euler element " + to_string(euler) + " acts as -1 on the radical");
}

}  // namespace detail

/// Decides whether the span of the given fields is a subalgebra of
/// constant-divergence fields isomorphic to sl2, saff2 or aff2, and for the
/// latter two recovers the etale map it is the image of. Never throws on
/// mathematical failure; the reasons land in diagnostics.
inline ClassificationReport classify(const std::vector<VectorField>& fields) {
  ClassificationReport rep;
  const VFSubspace s = span_reduce(fields);
  rep.dim = s.dim();
  if (s.dim() == 0) {
    rep.closed = true;
    rep.diagnostics.push_back("empty span");
    return rep;
  }
  LiePresentation lp;
  try {
    lp = structure_constants(s);
  } catch (const NotClosed& e) {
    rep.diagnostics.push_back(e.what());
    return rep;
  }
  rep.closed = true;
  for (const auto& d : lp.basis)
    if (!has_constant_divergence(d)) {
      rep.diagnostics.push_back("member " + to_string(d) + " has non-constant divergence " +
                                to_string(divergence(d)));
      return rep;
    }
  switch (s.dim()) {
    case 3: detail::classify_sl2(lp, rep); break;
    case 5: detail::classify_saff2(lp, rep); break;
    case 6: detail::classify_aff2(lp, rep); break;
    default:
      rep.diagnostics.push_back("dimension " + std::to_string(s.dim()) +
                                " matches none of sl2 (3), saff2 (5), aff2 (6)");
  }
  return rep;
}

enum class FinitenessStatus { Stabilized, Exceeded };

struct LocalFiniteness {
  FinitenessStatus status = FinitenessStatus::Stabilized;
  std::size_t dim = 0;                // dimension of the accumulated span
  std::vector<VectorField> witness;   // iterates of the probe that hit a cap
  std::string detail;
};

/// Bounded probe of local finiteness of ad(D). For each probe P the
/// iterates ad(D)^k(P) / k! are accumulated into one span until they fall
/// back into it. Exceeding a cap is evidence of an infinite orbit, not a
/// proof.
inline LocalFiniteness local_finiteness(const VectorField& d, const std::vector<VectorField>& probes,
                                        std::uint32_t degree_cap = 16, std::size_t iter_cap = 24) {
  if (degree_cap == 0 || iter_cap == 0)
    throw Error(ErrorCode::InvalidArgument, "local_finiteness caps must be positive");
  LocalFiniteness out;
  VFSubspace span;
  for (const auto& probe : probes) {
    span.insert(probe);
    std::vector<VectorField> iterates;
    VectorField v = probe;
    bool settled = false;
    for (std::size_t k = 1; k <= iter_cap && out.detail.empty(); ++k) {
      v = vf_bracket(d, v) * (Scalar(1) / static_cast<unsigned long>(k));
      if (v.is_zero() || span.contains(v)) {
        settled = true;
        break;
      }
      iterates.push_back(v);
      if (v.degree().value_or(0) > degree_cap)
        out.detail = "iterate " + std::to_string(k) + " of probe " + to_string(probe) +
                     " has degree " + std::to_string(*v.degree()) + " above cap " +
                     std::to_string(degree_cap) + "; bounded probe, not a proof";
      else
        span.insert(v);
    }
    if (!settled) {
      if (out.detail.empty())
        out.detail = "orbit of probe " + to_string(probe) + " still growing after " +
                     std::to_string(iter_cap) + " iterations; bounded probe, not a proof";
      out.status = FinitenessStatus::Exceeded;
      out.witness = std::move(iterates);
      out.dim = span.dim();
      return out;
    }
  }
  out.dim = span.dim();
  return out;
}

}  // namespace planelie
