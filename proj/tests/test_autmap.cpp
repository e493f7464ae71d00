#include <gtest/gtest.h>

#include "planelie/autmap.hpp"
#include "support.hpp"

using namespace planelie;
using planelie::oracle::Gen;

namespace {

const Poly x = Poly::x();
const Poly y = Poly::y();

// Checks a(b(p)) = (a o b)(p) at grid points, independently of compose.
bool composite_matches(const PolyMap& ab, const PolyMap& a, const PolyMap& b) {
  const std::uint32_t bound = max_degree(a) * std::max(max_degree(b), 1u);
  for (const auto& [u, v] : oracle::grid(std::min(bound, 12u))) {
    const Scalar bu = oracle::eval(b.f, u, v), bv = oracle::eval(b.g, u, v);
    if (oracle::eval(ab.f, u, v) != oracle::eval(a.f, bu, bv)) return false;
    if (oracle::eval(ab.g, u, v) != oracle::eval(a.g, bu, bv)) return false;
  }
  return true;
}

AutomorphismDecision decide(const PolyMap& m) { return decide_automorphism(m, max_degree(m)); }

}  // namespace

TEST(IsEtale, Examples) {
  const auto a = is_etale({x, y + x * x});
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->jac(), 1);
  EXPECT_FALSE(is_etale({x * x, y}).has_value());
  const auto s = is_etale({y, x});
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->jac(), -1);
}

TEST(ComposeMaps, Examples) {
  EXPECT_EQ(compose_maps({x, y + x * x}, {x, y - x * x}), PolyMap::identity());
  const PolyMap m{x * y + 1, pow(y, 3) - x};
  EXPECT_EQ(compose_maps(PolyMap::identity(), m), m);
  EXPECT_EQ(compose_maps(m, PolyMap::identity()), m);
}

TEST(ComposeMapsProperty, ChainRuleAndEvaluation) {
  Gen gen(61);
  for (int t = 0; t < 20; ++t) {
    const PolyMap a = random_automorphism(gen.seed(), 2, 2);
    const PolyMap b = random_automorphism(gen.seed(), 2, 2);
    const PolyMap ab = compose_maps(a, b);
    EXPECT_TRUE(composite_matches(ab, a, b));
    const auto ea = is_etale(a), eb = is_etale(b), eab = is_etale(ab);
    ASSERT_TRUE(ea && eb && eab);
    EXPECT_EQ(eab->jac(), ea->jac() * eb->jac());
    EXPECT_EQ(oracle::jacobian_at(ab, 3, -2), eab->jac());
  }
}

TEST(Decide, TriangularMap) {
  const AutomorphismDecision d = decide({x, y + x * x});
  ASSERT_EQ(d.verdict, Verdict::Automorphism);
  EXPECT_EQ(d.factorization.triangular_count(), 1u);
  EXPECT_EQ(d.factorization.compose(), (PolyMap{x, y + x * x}));
}

TEST(Decide, NotEtale) {
  const AutomorphismDecision d = decide({x * x, y});
  EXPECT_EQ(d.verdict, Verdict::NotAutomorphism);
  EXPECT_NE(d.reason.find("not etale"), std::string::npos);
  EXPECT_EQ(decide({x + y * y, y + x * x}).verdict, Verdict::NotAutomorphism);
}

TEST(Decide, TwoTriangularFactors) {
  const Poly u = x + y * y;
  const PolyMap m{u, y + pow(u, 3)};
  // Built as (x, y + x^3) o (x + y^2, y).
  ASSERT_EQ(compose_maps(PolyMap{x, y + pow(x, 3)}, PolyMap{x + y * y, y}), m);
  const AutomorphismDecision d = decide(m);
  ASSERT_EQ(d.verdict, Verdict::Automorphism);
  EXPECT_EQ(d.factorization.triangular_count(), 2u);
  EXPECT_EQ(d.factorization.compose(), m);
}

TEST(Decide, SingularAffinePart) {
  const AutomorphismDecision d = decide({x + y, Scalar(2) * x + Scalar(2) * y});
  EXPECT_EQ(d.verdict, Verdict::NotAutomorphism);
}

TEST(Decide, LinearMapIsSingleAffineFactor) {
  const AutomorphismDecision d = decide({Scalar(2) * x + y + 1, x + y});
  ASSERT_EQ(d.verdict, Verdict::Automorphism);
  ASSERT_EQ(d.factorization.factors.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<AffineFactor>(d.factorization.factors[0]));
  const AutomorphismDecision id = decide(PolyMap::identity());
  ASSERT_EQ(id.verdict, Verdict::Automorphism);
  EXPECT_EQ(id.factorization.compose(), PolyMap::identity());
}

TEST(Decide, CapIsEnforced) {
  try {
    (void)decide_automorphism({x, y + pow(x, 5)}, 3);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(PolyMap{x, y + x * x}), (PolyMap{x, y - x * x}));
  EXPECT_EQ(invert(PolyMap::identity()), PolyMap::identity());
  // 2x2 inverse oracle: [[2,1],[1,1]]^-1 = [[1,-1],[-1,2]].
  EXPECT_EQ(invert(PolyMap{Scalar(2) * x + y, x + y}), (PolyMap{x - y, -x + Scalar(2) * y}));
}

TEST(Invert, RejectsNonAutomorphism) {
  try {
    (void)invert(PolyMap{x * x, y});
    FAIL() << "expected NotAnAutomorphism";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnAutomorphism);
  }
}

TEST(ElementaryFactor, InverseComposesToIdentity) {
  const std::vector<ElementaryFactor> factors{
      AffineFactor{{{{2, 1}, {1, 1}}}, {3, -1}},
      TriangularFactor{Var::X, parse_poly("x^3 - 2*x + 1")},
      TriangularFactor{Var::Y, parse_poly("1/2*y^2")}};
  for (const auto& f : factors) {
    EXPECT_EQ(compose_maps(to_poly_map(f), to_poly_map(inverse(f))), PolyMap::identity());
    EXPECT_EQ(compose_maps(to_poly_map(inverse(f)), to_poly_map(f)), PolyMap::identity());
  }
}

TEST(RandomAutomorphism, Examples) {
  const PolyMap lin = random_automorphism(5, 0, 4);
  EXPECT_LE(max_degree(lin), 1u);
  EXPECT_TRUE(is_etale(lin).has_value());
  EXPECT_EQ(decide(random_automorphism(6, 3, 4)).verdict, Verdict::Automorphism);
  EXPECT_EQ(random_automorphism(7, 4, 3), random_automorphism(7, 4, 3));
  EXPECT_NE(random_automorphism(7, 4, 3), random_automorphism(8, 4, 3));
  EXPECT_THROW((void)random_automorphism(1, 2, 0), Error);
}

TEST(RandomAutomorphism, RespectsDegreeBudget) {
  for (std::uint64_t s = 0; s < 30; ++s) EXPECT_LE(max_degree(random_automorphism(s, 5, 5)), kDefaultDegreeBudget);
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_LE(max_degree(random_automorphism(s, 5, 5, 4)), 4u);
}

TEST(AutomorphismProperty, DecideFactorInvertOverSeededCorpus) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const PolyMap m = random_automorphism(1000 + s, 4, 3);
    const AutomorphismDecision d = decide(m);
    ASSERT_EQ(d.verdict, Verdict::Automorphism) << m << ": " << d.reason;
    EXPECT_EQ(d.factorization.compose(), m);
    const PolyMap inv = invert(d.factorization);
    EXPECT_EQ(compose_maps(m, inv), PolyMap::identity());
    EXPECT_EQ(compose_maps(inv, m), PolyMap::identity());
    EXPECT_TRUE(composite_matches(PolyMap::identity(), m, inv));
  }
}

TEST(AutomorphismProperty, FactorsHaveExpectedShape) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const AutomorphismDecision d = decide(random_automorphism(2000 + s, 4, 3));
    ASSERT_EQ(d.verdict, Verdict::Automorphism);
    for (const auto& f : d.factorization.factors) {
      if (const auto* t = std::get_if<TriangularFactor>(&f)) {
        // Univariate in its own variable.
        for (const auto& [m, c] : t->p.terms()) EXPECT_EQ(t->var == Var::X ? m.j : m.i, 0u);
      } else {
        const auto& a = std::get<AffineFactor>(f);
        EXPECT_NE(a.matrix[0][0] * a.matrix[1][1] - a.matrix[0][1] * a.matrix[1][0], 0);
      }
    }
  }
}

TEST(PolyMapText, RoundTripAndErrors) {
  const PolyMap m{parse_poly("x + y^2"), parse_poly("-3/2*y")};
  EXPECT_EQ(to_string(m), "y^2 + x ; -3/2*y");
  EXPECT_EQ(parse_poly_map(to_string(m)), m);
  EXPECT_THROW((void)parse_poly_map("x + y"), ParseError);
  try {
    (void)parse_poly_map("x ; y +");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}
