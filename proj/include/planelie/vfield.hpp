#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "planelie/poisson.hpp"
#include "planelie/vector_field.hpp"

namespace planelie {

/// x dx + y dy.
inline const VectorField& euler_field() {
  static const VectorField e{Poly::x(), Poly::y()};
  return e;
}

/// A polynomial map (f, g) whose Jacobian determinant is a nonzero constant.
/// Only constructible through make(), which checks that condition.
class EtaleMap {
 public:
  static std::optional<EtaleMap> make(Poly f, Poly g) {
    const Poly j = jacobian_det(f, g);
    if (j.is_zero() || !j.is_constant()) return std::nullopt;
    return EtaleMap(std::move(f), std::move(g), j.constant_term());
  }

  static EtaleMap identity() { return EtaleMap(Poly::x(), Poly::y(), 1); }

  const Poly& f() const { return f_; }
  const Poly& g() const { return g_; }
  const Scalar& jac() const { return jac_; }

  /// (f, g / jac), which has Jacobian 1.
  EtaleMap normalized() const { return EtaleMap(f_, g_ / jac_, 1); }

  friend bool operator==(const EtaleMap& a, const EtaleMap& b) = default;

 private:
  EtaleMap(Poly f, Poly g, Scalar jac) : f_(std::move(f)), g_(std::move(g)), jac_(std::move(jac)) {}

  Poly f_;
  Poly g_;
  Scalar jac_;
};

struct DivergenceZero {};
/// D = d0 + (c/2) E with d0 divergence-free.
struct ConstantDivergence {
  Scalar c;
  VectorField d0;
};
struct GeneralDivergence {
  Poly divergence;
};
using FieldClass = std::variant<DivergenceZero, ConstantDivergence, GeneralDivergence>;

inline FieldClass vf_class(const VectorField& d) {
  Poly div = divergence(d);
  if (div.is_zero()) return DivergenceZero{};
  if (!div.is_constant()) return GeneralDivergence{std::move(div)};
  Scalar c = div.constant_term();
  return ConstantDivergence{c, d - (c / 2) * euler_field()};
}

inline bool has_constant_divergence(const VectorField& d) { return divergence(d).is_constant(); }

/// alpha(D) = alpha o D o alpha^{-1}, written so that it only needs the
/// Jacobian of alpha to be a nonzero constant.
inline VectorField etale_conjugate(const EtaleMap& a, const VectorField& d) {
  const Poly& f = a.f();
  const Poly& g = a.g();
  const Poly ap = compose(d.p, f, g);
  const Poly aq = compose(d.q, f, g);
  const Scalar inv = Scalar(1) / a.jac();
  VectorField out{partial(g, Var::Y) * ap - partial(f, Var::Y) * aq,
                  partial(f, Var::X) * aq - partial(g, Var::X) * ap};
  return out * inv;
}

enum class AlgebraKind { Sl2, Saff2, Aff2, IntroSl2 };

inline std::string_view to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::Sl2: return "sl2";
    case AlgebraKind::Saff2: return "saff2";
    case AlgebraKind::Aff2: return "aff2";
    case AlgebraKind::IntroSl2: return "intro_sl2";
  }
  return "?";
}

inline std::vector<VectorField> standard_basis(AlgebraKind kind) {
  const Poly x = Poly::x(), y = Poly::y();
  const VectorField dx = VectorField::dx(), dy = VectorField::dy();
  const VectorField x_dy{0, x}, y_dx{y, 0}, h{x, -y};
  switch (kind) {
    case AlgebraKind::Sl2: return {x_dy, y_dx, h};
    case AlgebraKind::Saff2: return {dx, dy, h, x_dy, y_dx};
    case AlgebraKind::Aff2: return {dx, dy, euler_field(), h, x_dy, y_dx};
    case AlgebraKind::IntroSl2: return {{x * x, Scalar(-2) * x * y}, h, dx};
  }
  return {};
}

/// The image of saff2 or aff2 under an etale map, as the fields
///   saff2: D_f, D_g, D_{f^2}, D_{g^2}, D_{fg}
///   aff2:  D_f, D_g, D_{f^2}, D_{g^2}, f D_g, g D_f
/// with g first divided by the Jacobian so that {f,g} = 1.
inline std::vector<VectorField> alpha_image(const EtaleMap& a, AlgebraKind kind) {
  const EtaleMap n = a.normalized();
  const Poly& f = n.f();
  const Poly& g = n.g();
  const VectorField df = mu(f), dg = mu(g);
  std::vector<VectorField> out{df, dg, mu(f * f), mu(g * g)};
  switch (kind) {
    case AlgebraKind::Saff2:
      out.push_back(mu(f * g));
      return out;
    case AlgebraKind::Aff2:
      out.push_back(f * dg);
      out.push_back(g * df);
      return out;
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "alpha_image is defined for saff2 and aff2, not " + std::string(to_string(kind)));
  }
}

}  // namespace planelie
