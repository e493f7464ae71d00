#include <gtest/gtest.h>

#include "planelie/linalg.hpp"
#include "support.hpp"

using namespace planelie;
using planelie::oracle::Gen;

namespace {

Matrix random_matrix(Gen& gen, std::size_t r, std::size_t c, unsigned zero_one_in = 3) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (!gen.coin(zero_one_in)) m(i, j) = gen.rational();
  return m;
}

// Laplace expansion along the first row.
Scalar cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Scalar det = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != k) minor(i - 1, jj++) = m(i, j);
    const Scalar term = m(0, k) * cofactor_det(minor);
    det += k % 2 ? Scalar(-term) : term;
  }
  return det;
}

}  // namespace

TEST(Matrix, DeterminantMatchesCofactorExpansion) {
  Gen gen(21);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 5;
    const Matrix m = random_matrix(gen, n, n, 2 + t % 3);
    EXPECT_EQ(determinant(m), cofactor_det(m));
  }
}

TEST(Matrix, SingularDeterminantIsZero) {
  Matrix m(3, 3);
  m(0, 0) = 1, m(0, 1) = 2, m(0, 2) = 3;
  m(1, 0) = 2, m(1, 1) = 4, m(1, 2) = 6;
  m(2, 0) = 0, m(2, 1) = 1, m(2, 2) = 1;
  EXPECT_EQ(determinant(m), 0);
  EXPECT_EQ(rank(m), 2u);
}

TEST(Matrix, NullspaceIsKernelAndRankNullity) {
  Gen gen(22);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 6;
    const Matrix m = random_matrix(gen, r, c);
    const auto ns = nullspace(m);
    EXPECT_EQ(ns.size() + rank(m), c);
    for (const auto& v : ns)
      for (const auto& entry : m * v) EXPECT_EQ(entry, 0);
    if (!ns.empty()) {
      EXPECT_EQ(span_basis(ns, c).size(), ns.size());
    }
  }
}

TEST(Matrix, SolveFindsSolutionOrReportsInconsistency) {
  Gen gen(23);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 2 + t % 3, c = 2 + (t / 3) % 3;
    const Matrix m = random_matrix(gen, r, c);
    ScalarVector x0(c);
    for (auto& e : x0) e = gen.rational();
    const auto sol = solve(m, m * x0);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(m * *sol, m * x0);
  }
  Matrix zero(2, 2);
  EXPECT_FALSE(solve(zero, {1, 0}).has_value());
}

TEST(Matrix, ProductTransposeTrace) {
  Gen gen(24);
  const Matrix a = random_matrix(gen, 3, 4), b = random_matrix(gen, 4, 3);
  EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
  EXPECT_EQ((a * b).trace(), (b * a).trace());
  EXPECT_EQ(Matrix::identity(3) * (a * b), a * b);
}

TEST(EchelonBasis, InsertReportsDependence) {
  EchelonBasis<int> e;
  EXPECT_TRUE(e.insert({{0, 1}, {1, 2}}));
  EXPECT_FALSE(e.insert({{0, 2}, {1, 4}}));
  EXPECT_TRUE(e.insert({{0, 1}}));
  EXPECT_EQ(e.dim(), 2u);
  EXPECT_TRUE(e.contains({{1, 5}}));
  EXPECT_FALSE(e.contains({{2, 1}}));
}

TEST(EchelonBasis, CanonicalRegardlessOfInsertionOrder) {
  Gen gen(25);
  for (int t = 0; t < 30; ++t) {
    std::vector<SparseVector<int>> vs;
    for (int k = 0; k < 4; ++k) {
      SparseVector<int> v;
      for (int i = 0; i < 6; ++i)
        if (gen.coin(2)) v[i] = gen.rational();
      for (auto it = v.begin(); it != v.end();) it = is_zero(it->second) ? v.erase(it) : std::next(it);
      vs.push_back(v);
    }
    EchelonBasis<int> a, b;
    for (const auto& v : vs) a.insert(v);
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) b.insert(*it);
    EXPECT_TRUE(a == b);
    for (const auto& v : vs) {
      const auto co = a.coordinates(v);
      ASSERT_TRUE(co.has_value());
      SparseVector<int> back;
      for (std::size_t r = 0; r < a.dim(); ++r)
        for (const auto& [k, c] : a.rows()[r]) back[k] += (*co)[r] * c;
      for (auto it = back.begin(); it != back.end();)
        it = is_zero(it->second) ? back.erase(it) : std::next(it);
      EXPECT_EQ(back, v);
    }
  }
}
