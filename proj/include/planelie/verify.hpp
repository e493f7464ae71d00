#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "planelie/autmap.hpp"
#include "planelie/liestruct.hpp"

namespace planelie {

struct CheckResult {
  std::string group;
  std::string name;
  bool pass = false;
  std::string detail;  // first counterexample, or a summary
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::optional<unsigned> trials;  // group default when unset
  unsigned trials_or(unsigned fallback) const { return trials.value_or(fallback); }
};

namespace detail {

/// Random polynomial of degree at most max_degree with small integer
/// coefficients; roughly half of the monomials are present.
inline Poly random_poly(std::mt19937_64& rng, std::uint32_t max_degree) {
  Poly p;
  for (const Monomial m : monomials_upto(max_degree))
    if (rng() % 2) p.add_term(m, static_cast<long>(rng() % 7) - 3);
  return p;
}

/// Collects one pass/fail line for a property checked over many trials,
/// remembering the first failure.
class Tally {
 public:
  Tally(std::string group, std::string name) : result_{std::move(group), std::move(name), true, {}} {}

  void check(bool ok, const std::function<std::string()>& describe) {
    ++count_;
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.detail = "counterexample: " + describe();
    }
  }

  CheckResult done() {
    if (result_.pass) result_.detail = std::to_string(count_) + " case(s)";
    return result_;
  }

 private:
  CheckResult result_;
  std::size_t count_ = 0;
};

inline CheckResult single(std::string group, std::string name, bool pass, std::string detail = {}) {
  return {std::move(group), std::move(name), pass, std::move(detail)};
}

inline std::vector<CheckResult> verify_tables(const VerifyOptions&) {
  const Poly x = Poly::x(), y = Poly::y();
  struct Row {
    Poly f, g, expected;
  };
  const Scalar two = 2, four = 4;
  const std::vector<Row> rows{
      {x * x, x * y, two * x * x}, {x * x, y * y, four * x * y}, {y * y, x * y, -two * y * y},
      {x * x, x, 0},               {x * y, x, -x},              {y * y, x, -two * y},
      {x * x, y, two * x},         {x * y, y, y},               {y * y, y, 0},
      {x, y, 1}};
  std::vector<CheckResult> out;
  for (const auto& r : rows) {
    const Poly got = poisson_bracket(r.f, r.g);
    out.push_back(single("tables",
                         "{" + to_string(r.f) + ", " + to_string(r.g) + "} = " + to_string(r.expected),
                         got == r.expected, "got " + to_string(got)));
  }
  return out;
}

inline std::vector<CheckResult> verify_lem1d(const VerifyOptions&) {
  const ClosureResult res = lie_closure({Poly::x(), pow(Poly::x(), 3), pow(Poly::y(), 2)}, 10, 4096);
  std::size_t missing = 0;
  std::string first;
  for (const Monomial m : monomials_upto(9))
    if (!res.span.contains(Poly::monomial(1, m.i, m.j))) {
      if (missing++ == 0) first = to_string(Poly::monomial(1, m.i, m.j));
    }
  std::size_t slice = 0;
  for (const auto& b : res.span.basis()) slice += *b.degree() <= 9;
  return {single("lem1d", "closure of x, x^3, y^2 contains every monomial of degree <= 9", missing == 0,
                 missing == 0 ? "span dimension " + std::to_string(res.span.dim())
                              : std::to_string(missing) + " missing, first " + first),
          single("lem1d", "degree <= 9 slice of the closure has dimension 55", slice == 55,
                 "slice dimension " + std::to_string(slice))};
}

inline std::vector<CheckResult> verify_mu(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Tally div("mu", "Div(D_h) = 0"), hom("mu", "[D_f, D_g] = D_{f,g}"),
      inv("mu", "integrate_hamiltonian(D_h) = h - h(0,0)");
  for (unsigned t = 0; t < opt.trials_or(100); ++t) {
    const Poly h = random_poly(rng, 8), f = random_poly(rng, 5), g = random_poly(rng, 5);
    div.check(divergence(mu(h)).is_zero(), [&] { return "h = " + to_string(h); });
    hom.check(vf_bracket(mu(f), mu(g)) == mu(poisson_bracket(f, g)),
              [&] { return "f = " + to_string(f) + ", g = " + to_string(g); });
    inv.check(integrate_hamiltonian(mu(h)) == h - Poly(h.constant_term()),
              [&] { return "h = " + to_string(h); });
  }
  return {div.done(), hom.done(), inv.done()};
}

inline std::vector<CheckResult> verify_equiv(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Tally hamiltonian("equiv", "alpha(D_h) = j(alpha)^-1 D_{alpha(h)}"),
      euler("equiv", "Div(alpha(E)) = 2");
  for (unsigned t = 0; t < opt.trials_or(20); ++t) {
    const PolyMap m = random_automorphism(rng(), 3, 3);
    const EtaleMap a = *is_etale(m);
    const Poly h = random_poly(rng, 4);
    hamiltonian.check(
        etale_conjugate(a, mu(h)) == mu(compose(h, m)) * (Scalar(1) / a.jac()),
        [&] { return "alpha = " + to_string(m) + ", h = " + to_string(h); });
    euler.check(divergence(etale_conjugate(a, euler_field())) == Poly(2),
                [&] { return "alpha = " + to_string(m); });
  }
  return {hamiltonian.done(), euler.done()};
}

inline std::vector<CheckResult> verify_alpha_images(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const Poly x = Poly::x(), y = Poly::y();
  struct Display {
    std::string name;
    VectorField source;
    std::function<VectorField(const Poly&, const Poly&)> image;
  };
  const std::vector<Display> displays{
      {"alpha(dx) = -D_g", VectorField::dx(), [](const Poly&, const Poly& g) { return -mu(g); }},
      {"alpha(dy) = D_f", VectorField::dy(), [](const Poly& f, const Poly&) { return mu(f); }},
      {"alpha(x dy) = f D_f = 1/2 D_{f^2}", {0, x},
       [](const Poly& f, const Poly&) { return f * mu(f); }},
      {"alpha(y dx) = -g D_g = -1/2 D_{g^2}", {y, 0},
       [](const Poly&, const Poly& g) { return -(g * mu(g)); }},
      {"alpha(x dx) = -f D_g", {x, 0}, [](const Poly& f, const Poly& g) { return -(f * mu(g)); }},
      {"alpha(y dy) = g D_f", {0, y}, [](const Poly& f, const Poly& g) { return g * mu(f); }},
      {"alpha(x dx - y dy) = -D_{fg}", {x, -y},
       [](const Poly& f, const Poly& g) { return -mu(f * g); }},
  };
  std::vector<Tally> tallies;
  for (const auto& d : displays) tallies.emplace_back("alpha-images", d.name);
  Tally halves("alpha-images", "f D_f = 1/2 D_{f^2} and g D_g = 1/2 D_{g^2}");
  for (unsigned t = 0; t < opt.trials_or(20); ++t) {
    const EtaleMap a = is_etale(random_automorphism(rng(), 3, 3))->normalized();
    const Poly &f = a.f(), &g = a.g();
    for (std::size_t k = 0; k < displays.size(); ++k)
      tallies[k].check(etale_conjugate(a, displays[k].source) == displays[k].image(f, g),
                       [&] { return "(f, g) = (" + to_string(f) + ", " + to_string(g) + ")"; });
    halves.check(f * mu(f) == mu(f * f) * Scalar(1, 2) && g * mu(g) == mu(g * g) * Scalar(1, 2),
                 [&] { return "(f, g) = (" + to_string(f) + ", " + to_string(g) + ")"; });
  }
  std::vector<CheckResult> out;
  for (auto& t : tallies) out.push_back(t.done());
  out.push_back(halves.done());
  return out;
}

inline std::vector<CheckResult> verify_subvec_roundtrip(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Tally saff("subvec-roundtrip", "classify(alpha(saff2)) is Saff2 and its map reproduces the span"),
      aff("subvec-roundtrip", "classify(alpha(aff2)) is Aff2 and its map reproduces the span");
  for (unsigned t = 0; t < opt.trials_or(25); ++t) {
    const PolyMap m = random_automorphism(rng(), 3, 3);
    const EtaleMap a = *is_etale(m);
    for (auto [kind, tag, tally] : {std::tuple{AlgebraKind::Saff2, TypeTag::Saff2, &saff},
                                    std::tuple{AlgebraKind::Aff2, TypeTag::Aff2, &aff}}) {
      const auto fields = alpha_image(a, kind);
      const ClassificationReport r = classify(fields);
      const bool ok = r.type_tag == tag && r.recovered_map &&
                      span_reduce(alpha_image(*r.recovered_map, kind)) == span_reduce(fields);
      tally->check(ok, [&] {
        return "alpha = " + to_string(m) + ", got " + std::string(to_string(r.type_tag)) +
               (r.diagnostics.empty() ? "" : " (" + r.diagnostics.back() + ")");
      });
    }
  }
  return {saff.done(), aff.done()};
}

inline std::vector<CheckResult> verify_example_rem(const VerifyOptions&) {
  const ClassificationReport r = classify(standard_basis(AlgebraKind::IntroSl2));
  std::vector<CheckResult> out;
  std::string triple;
  for (const auto& d : r.levi_basis) triple += (triple.empty() ? "" : ", ") + to_string(d);
  out.push_back(single("example-rem", "<x^2 dx - 2xy dy, x dx - y dy, dx> is isomorphic to sl2",
                       r.type_tag == TypeTag::Sl2 && r.levi_basis.size() == 3,
                       "triple (e, h, f) = " + triple));
  const bool differs = span_reduce(standard_basis(AlgebraKind::IntroSl2)) !=
                       span_reduce(standard_basis(AlgebraKind::Sl2));
  out.push_back(single("example-rem", "its span differs from <x dy, y dx, x dx - y dy>", differs));
  const VectorField d{Poly::x() * Poly::x(), Scalar(-2) * Poly::x() * Poly::y()};
  const LocalFiniteness lf = local_finiteness(d, {VectorField::dy()});
  const bool iterates = lf.witness.size() >= 2 &&
                        lf.witness[0] == VectorField{0, Scalar(2) * Poly::x()} &&
                        lf.witness[1] == VectorField{0, Scalar(3) * Poly::x() * Poly::x()};
  out.push_back(single("example-rem", "x^2 dx - 2xy dy does not act locally finitely (bounded probe)",
                       lf.status == FinitenessStatus::Exceeded && iterates, lf.detail));
  return out;
}

inline std::vector<CheckResult> verify_subvec_cor(const VerifyOptions&) {
  Tally radical("subvec-cor", "translations: radical of alpha(saff2) is <dx, dy>"),
      same("subvec-cor", "translations: classify returns the input subspace");
  const VFSubspace translations = span_reduce({VectorField::dx(), VectorField::dy()});
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) {
      const EtaleMap alpha = *EtaleMap::make(Poly::x() + Poly(a), Poly::y() + Poly(b));
      const auto fields = alpha_image(alpha, AlgebraKind::Saff2);
      const ClassificationReport r = classify(fields);
      auto where = [&] { return "(a, b) = (" + std::to_string(a) + ", " + std::to_string(b) + ")"; };
      radical.check(r.type_tag == TypeTag::Saff2 && span_reduce(r.radical_basis) == translations,
                    where);
      same.check(r.recovered_map && span_reduce(alpha_image(*r.recovered_map, AlgebraKind::Saff2)) ==
                                        span_reduce(fields),
                 where);
    }
  return {radical.done(), same.done()};
}

inline std::vector<CheckResult> verify_automorphisms(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Tally decided("automorphisms", "random tame automorphisms are decided as automorphisms"),
      faithful("automorphisms", "factorizations compose back to the input"),
      inverse("automorphisms", "invert gives a two-sided inverse");
  for (unsigned t = 0; t < opt.trials_or(100); ++t) {
    const PolyMap m = random_automorphism(rng(), 5, 5);
    const AutomorphismDecision d = decide_automorphism(m, max_degree(m));
    auto where = [&] { return to_string(m); };
    decided.check(d.verdict == Verdict::Automorphism, where);
    if (d.verdict != Verdict::Automorphism) continue;
    faithful.check(d.factorization.compose() == m, where);
    const PolyMap inv = invert(d.factorization);
    inverse.check(compose_maps(inv, m) == PolyMap::identity() &&
                      compose_maps(m, inv) == PolyMap::identity(),
                  where);
  }
  std::vector<CheckResult> out{decided.done(), faithful.done(), inverse.done()};
  const Poly x = Poly::x(), y = Poly::y();
  for (const PolyMap& m : {PolyMap{x * x, y}, PolyMap{x + y * y, y + x * x}}) {
    const AutomorphismDecision d = decide_automorphism(m, max_degree(m));
    out.push_back(single("automorphisms", "(" + to_string(m.f) + ", " + to_string(m.g) + ") is rejected",
                         d.verdict == Verdict::NotAutomorphism, d.reason));
  }
  return out;
}

}  // namespace detail

struct VerifyGroup {
  std::string_view id;
  std::string_view about;
  std::vector<CheckResult> (*run)(const VerifyOptions&);
};

inline const std::vector<VerifyGroup>& verify_groups() {
  static const std::vector<VerifyGroup> groups{
      {"tables", "Poisson brackets of degree <= 2 monomials", detail::verify_tables},
      {"lem1d", "x, x^3 and y^2 generate P up to degree 9", detail::verify_lem1d},
      {"mu", "mu is a divergence-free Lie homomorphism", detail::verify_mu},
      {"equiv", "etale conjugation of Hamiltonian and Euler fields", detail::verify_equiv},
      {"alpha-images", "images of the affine fields under an etale map", detail::verify_alpha_images},
      {"subvec-roundtrip", "classify recovers the map behind alpha(saff2), alpha(aff2)",
       detail::verify_subvec_roundtrip},
      {"example-rem", "an sl2 not conjugate to the standard one", detail::verify_example_rem},
      {"subvec-cor", "translations fix the saff2 radical", detail::verify_subvec_cor},
      {"automorphisms", "automorphism decider and inverter", detail::verify_automorphisms},
  };
  return groups;
}

/// Runs one group, or every group for "all".
inline std::vector<CheckResult> run_verify(std::string_view id, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (const auto& g : verify_groups()) {
    if (id != "all" && id != g.id) continue;
    auto part = g.run(opt);
    out.insert(out.end(), part.begin(), part.end());
    if (id != "all") return out;
  }
  if (id == "all") return out;
  std::string ids = "all";
  for (const auto& g : verify_groups()) ids += ", " + std::string(g.id);
  throw Error(ErrorCode::InvalidArgument, "unknown verification id '" + std::string(id) +
                                              "'; available: " + ids);
}

}  // namespace planelie
