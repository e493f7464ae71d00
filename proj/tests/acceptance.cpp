// Acceptance run: each criterion is checked exactly and timed against its
// limit. Prints one PASS/FAIL line per criterion; exits 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "planelie/autmap.hpp"
#include "planelie/liestruct.hpp"
#include "support.hpp"

using namespace planelie;
using planelie::oracle::Gen;

namespace {

const Poly x = Poly::x();
const Poly y = Poly::y();
const VectorField dx = VectorField::dx();
const VectorField dy = VectorField::dy();

struct Criterion {
  int id;
  std::string about;
  double limit_ms;  // 0 for no limit
  std::function<std::string()> run;  // empty string on success, else the first failure
};

std::string check_tables() {
  const Scalar two = 2, four = 4;
  struct Row {
    Poly f, g, expected;
  };
  std::vector<Row> rows{
      {x * x, x * y, two * x * x}, {x * x, y * y, four * x * y}, {y * y, x * y, -two * y * y},
      {x * x, x, 0},               {x * y, x, -x},              {y * y, x, -two * y},
      {x * x, y, two * x},         {x * y, y, y},               {y * y, y, 0},
      {x, y, 1},                   {pow(x, 3), y * y, Scalar(6) * x * x * y}};
  for (long n = 0; n <= 8; ++n) rows.push_back({pow(x, n), x * x * y, Scalar(n) * pow(x, n + 1)});
  for (const auto& r : rows) {
    const Poly b = poisson_bracket(r.f, r.g);
    if (b != r.expected || oracle::naive_bracket(r.f, r.g) != r.expected)
      return "{" + to_string(r.f) + ", " + to_string(r.g) + "} = " + to_string(b);
  }
  return {};
}

std::string check_generation() {
  const ClosureResult res = lie_closure({x, pow(x, 3), y * y}, 10, 100000);
  std::size_t slice = 0;
  for (const auto& b : res.span.basis()) slice += *b.degree() <= 9;
  for (std::uint32_t n = 0; n <= 9; ++n)
    for (std::uint32_t i = 0; i <= n; ++i)
      if (!res.span.contains(Poly::monomial(1, i, n - i)))
        return "missing x^" + std::to_string(i) + "*y^" + std::to_string(n - i);
  if (slice != 55) return "degree <= 9 slice has dimension " + std::to_string(slice);
  return {};
}

std::string check_mu() {
  Gen gen(301);
  for (int t = 0; t < 100; ++t) {
    const Poly h = gen.poly(8, t % 2), f = gen.poly(8), g = gen.poly(8, true);
    if (mu(h) != oracle::naive_mu(h)) return "mu(" + to_string(h) + ")";
    if (!divergence(mu(h)).is_zero()) return "Div mu(" + to_string(h) + ") != 0";
    if (vf_bracket(mu(f), mu(g)) != mu(poisson_bracket(f, g)))
      return "[mu f, mu g] != mu {f,g} for f = " + to_string(f) + ", g = " + to_string(g);
    if (integrate_hamiltonian(mu(h)) != h - Poly(h.constant_term()))
      return "integrate(mu(" + to_string(h) + "))";
  }
  return {};
}

std::string check_conjugation() {
  Gen gen(401);
  for (int a_index = 0; a_index < 20; ++a_index) {
    const PolyMap m = random_automorphism(gen.seed(), 3, 3);
    const EtaleMap a = *EtaleMap::make(m.f, m.g);
    if (divergence(etale_conjugate(a, euler_field())) != Poly(2)) return "Div alpha(E) for " + to_string(m);
    const Scalar inv = Scalar(1) / a.jac();
    for (int h_index = 0; h_index < 20; ++h_index) {
      const Poly h = gen.poly(4, h_index % 2);
      if (etale_conjugate(a, mu(h)) != inv * oracle::naive_mu(compose(h, m)))
        return "alpha(D_h) for " + to_string(m) + ", h = " + to_string(h);
    }
  }
  return {};
}

std::string check_alpha_images() {
  Gen gen(501);
  for (int t = 0; t < 20; ++t) {
    const PolyMap m = random_automorphism(gen.seed(), 3, 3);
    const EtaleMap a = EtaleMap::make(m.f, m.g)->normalized();
    const Poly& f = a.f();
    const Poly& g = a.g();
    const VectorField Df = oracle::naive_mu(f), Dg = oracle::naive_mu(g);
    const std::vector<std::pair<VectorField, VectorField>> displays{
        {dx, -Dg},
        {dy, Df},
        {VectorField{0, x}, Scalar(1, 2) * oracle::naive_mu(oracle::naive_product(f, f))},
        {VectorField{y, 0}, Scalar(-1, 2) * oracle::naive_mu(oracle::naive_product(g, g))},
        {VectorField{x, 0}, -(f * Dg)},
        {VectorField{0, y}, g * Df},
        {VectorField{x, -y}, -oracle::naive_mu(oracle::naive_product(f, g))}};
    for (const auto& [d, expected] : displays)
      if (etale_conjugate(a, d) != expected)
        return "alpha(" + to_string(d) + ") for (" + to_string(f) + ", " + to_string(g) + ")";
    if (f * Df != Scalar(1, 2) * oracle::naive_mu(oracle::naive_product(f, f)) ||
        g * Dg != Scalar(1, 2) * oracle::naive_mu(oracle::naive_product(g, g)))
      return "f D_f != D_{f^2}/2";
  }
  return {};
}

std::string check_round_trip() {
  Gen gen(601);
  for (int t = 0; t < 25; ++t) {
    const PolyMap m = random_automorphism(gen.seed(), 3, 3);
    const EtaleMap a = *EtaleMap::make(m.f, m.g);
    for (auto [kind, tag] : {std::pair{AlgebraKind::Saff2, TypeTag::Saff2},
                             std::pair{AlgebraKind::Aff2, TypeTag::Aff2}}) {
      const auto input = alpha_image(a, kind);
      const ClassificationReport r = classify(input);
      if (r.type_tag != tag || !r.recovered_map)
        return to_string(m) + ": classified as " + std::string(to_string(r.type_tag));
      if (span_reduce(alpha_image(*r.recovered_map, kind)) != span_reduce(input))
        return to_string(m) + ": recovered map does not reproduce the span";
    }
  }
  return {};
}

std::string check_example() {
  const ClassificationReport r = classify(standard_basis(AlgebraKind::IntroSl2));
  if (r.type_tag != TypeTag::Sl2 || r.levi_basis.size() != 3) return "not classified as Sl2";
  const VectorField& e = r.levi_basis[0];
  const VectorField& h = r.levi_basis[1];
  const VectorField& f = r.levi_basis[2];
  if (oracle::naive_vf_bracket(h, e) != Scalar(2) * e || oracle::naive_vf_bracket(h, f) != Scalar(-2) * f ||
      oracle::naive_vf_bracket(e, f) != h)
    return "returned triple fails the relations";
  if (span_reduce(standard_basis(AlgebraKind::IntroSl2)) == span_reduce(standard_basis(AlgebraKind::Sl2)))
    return "span equals the standard sl2";
  const LocalFiniteness lf = local_finiteness(VectorField{x * x, Scalar(-2) * x * y}, {dy});
  if (lf.status != FinitenessStatus::Exceeded) return "local finiteness stabilized";
  if (lf.witness.size() < 2 || lf.witness[0] != VectorField{0, Scalar(2) * x} ||
      lf.witness[1] != VectorField{0, Scalar(3) * x * x})
    return "unexpected first iterates";
  return {};
}

std::string check_decider() {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const PolyMap m = random_automorphism(800 + s, 5, 5);
    const AutomorphismDecision d = decide_automorphism(m, max_degree(m));
    if (d.verdict != Verdict::Automorphism) return to_string(m) + ": " + d.reason;
    if (d.factorization.compose() != m) return to_string(m) + ": factorization not faithful";
    const PolyMap inv = invert(d.factorization);
    if (compose_maps(m, inv) != PolyMap::identity() || compose_maps(inv, m) != PolyMap::identity())
      return to_string(m) + ": inverse is not two-sided";
  }
  for (const PolyMap& bad : {PolyMap{x * x, y}, PolyMap{x + y * y, y + x * x}}) {
    const AutomorphismDecision d = decide_automorphism(bad, max_degree(bad));
    if (d.verdict != Verdict::NotAutomorphism || d.reason.rfind("not etale", 0) != 0)
      return to_string(bad) + " not rejected as non-etale";
  }
  return {};
}

std::string check_translations() {
  const VFSubspace plane = span_reduce({dx, dy});
  const VFSubspace saff = span_reduce(standard_basis(AlgebraKind::Saff2));
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) {
      const EtaleMap t = *EtaleMap::make(x + a, y + b);
      const auto input = alpha_image(t, AlgebraKind::Saff2);
      const ClassificationReport r = classify(input);
      const std::string where = "(x + " + std::to_string(a) + ", y + " + std::to_string(b) + ")";
      if (r.type_tag != TypeTag::Saff2) return where + ": not Saff2";
      if (span_reduce(r.radical_basis) != plane) return where + ": radical differs";
      if (span_reduce(input) != saff || span_reduce(alpha_image(*r.recovered_map, AlgebraKind::Saff2)) != saff)
        return where + ": subspace differs";
    }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bracket tables and {x^n, x^2 y} = n x^(n+1)", 1000, check_tables},
      {2, "closure of {x, x^3, y^2} contains all monomials of degree <= 9", 10000, check_generation},
      {3, "mu: divergence free, homomorphism, integration round trip", 0, check_mu},
      {4, "conjugation of Hamiltonian fields and of the Euler field", 0, check_conjugation},
      {5, "seven displayed alpha-images for Jacobian-one pairs", 0, check_alpha_images},
      {6, "saff2/aff2 classification round trip over 25 automorphisms", 60000, check_round_trip},
      {7, "non-standard sl2: rational triple and infinite ad-orbit", 0, check_example},
      {8, "automorphism decider over 100 tame automorphisms", 30000, check_decider},
      {9, "translations keep the radical <dx, dy> and the subspace", 0, check_translations}};

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = c.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && c.limit_ms > 0 && ms > c.limit_ms)
      failure = "took " + std::to_string(static_cast<long>(ms)) + " ms, limit " +
                std::to_string(static_cast<long>(c.limit_ms)) + " ms";
    const bool pass = failure.empty();
    failed += !pass;
    std::printf("%s criterion %d: %s (%.0f ms)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.about.c_str(), ms,
                pass ? "" : " -- ", failure.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
