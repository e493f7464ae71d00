#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "planelie/scalar.hpp"

namespace planelie {

using ScalarVector = std::vector<Scalar>;

template <class Key>
using SparseVector = std::map<Key, Scalar>;

/// Reduced row-echelon basis of a subspace of a sparse coordinate space.
/// The pivot of a row is its largest key, with coefficient 1, and no other
/// row has a nonzero entry at that key. Rows are kept sorted by pivot, so two
/// bases span the same space iff their rows are identical.
template <class Key>
class EchelonBasis {
 public:
  using Vector = SparseVector<Key>;

  const std::vector<Vector>& rows() const { return rows_; }
  std::size_t dim() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  Vector reduce(Vector v) const {
    for (const auto& row : rows_) {
      auto it = v.find(row.rbegin()->first);
      if (it == v.end()) continue;
      Scalar a = it->second;
      axpy(v, -a, row);
    }
    return v;
  }

  bool contains(const Vector& v) const { return reduce(v).empty(); }

  /// Adds v to the span; returns false when v was already in it.
  bool insert(const Vector& v) {
    Vector r = reduce(v);
    if (r.empty()) return false;
    Scalar lead = r.rbegin()->second;
    for (auto& [k, c] : r) c /= lead;
    const Key pivot = r.rbegin()->first;
    for (auto& row : rows_) {
      auto it = row.find(pivot);
      if (it == row.end()) continue;
      Scalar a = it->second;
      axpy(row, -a, r);
    }
    auto pos = rows_.begin();
    while (pos != rows_.end() && pos->rbegin()->first < pivot) ++pos;
    rows_.insert(pos, std::move(r));
    return true;
  }

  /// Coefficients of v in terms of rows(), or nothing when v is outside the
  /// span.
  std::optional<ScalarVector> coordinates(const Vector& v) const {
    ScalarVector out(rows_.size());
    Vector rest = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto it = v.find(rows_[i].rbegin()->first);
      if (it == v.end()) continue;
      out[i] = it->second;
      axpy(rest, -out[i], rows_[i]);
    }
    if (!rest.empty()) return std::nullopt;
    return out;
  }

  friend bool operator==(const EchelonBasis& a, const EchelonBasis& b) = default;

 private:
  static void axpy(Vector& v, const Scalar& a, const Vector& row) {
    for (const auto& [k, c] : row) {
      auto [it, inserted] = v.try_emplace(k, a * c);
      if (!inserted) {
        it->second += a * c;
        if (is_zero(it->second)) v.erase(it);
      }
    }
  }

  std::vector<Vector> rows_;
};

/// Small dense matrix over the rationals, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Matrix whose rows are the given vectors (all of length cols).
  static Matrix from_rows(const std::vector<ScalarVector>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ScalarVector row(std::size_t i) const {
    return ScalarVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  ScalarVector column(std::size_t j) const {
    ScalarVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  bool is_zero() const {
    for (const auto& c : data_)
      if (!planelie::is_zero(c)) return false;
    return true;
  }

  Scalar trace() const {
    Scalar t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (planelie::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend ScalarVector operator*(const Matrix& a, const ScalarVector& v) {
    ScalarVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator*(const Scalar& s, Matrix a) {
    for (auto& c : a.data_) c *= s;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct RowReduction {
  Matrix rref;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

inline RowReduction row_reduce(Matrix m) {
  RowReduction out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = Scalar(1) / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      Scalar a = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= a * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rref = std::move(m);
  return out;
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

/// Basis of {v : m v = 0}, one vector per free column.
inline std::vector<ScalarVector> nullspace(const Matrix& m) {
  const RowReduction red = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : red.pivots) is_pivot[c] = true;
  std::vector<ScalarVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    ScalarVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < red.pivots.size(); ++r) v[red.pivots[r]] = -red.rref(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// A particular solution of m v = b (free variables set to zero), or nothing
/// when the system is inconsistent.
inline std::optional<ScalarVector> solve(const Matrix& m, const ScalarVector& b) {
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const RowReduction red = row_reduce(std::move(aug));
  ScalarVector v(m.cols());
  for (std::size_t r = 0; r < red.pivots.size(); ++r) {
    if (red.pivots[r] == m.cols()) return std::nullopt;
    v[red.pivots[r]] = red.rref(r, m.cols());
  }
  return v;
}

inline Scalar determinant(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Scalar det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      Scalar a = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= a * m(c, j);
    }
  }
  return det;
}

/// Reduced basis (rows) of the span of the given vectors.
inline std::vector<ScalarVector> span_basis(const std::vector<ScalarVector>& vectors,
                                            std::size_t dim) {
  if (vectors.empty()) return {};
  const RowReduction red = row_reduce(Matrix::from_rows(vectors, dim));
  std::vector<ScalarVector> out;
  for (std::size_t r = 0; r < red.pivots.size(); ++r) out.push_back(red.rref.row(r));
  return out;
}

}  // namespace planelie
