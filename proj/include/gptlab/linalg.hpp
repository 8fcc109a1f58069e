#pragma once

// Dense linear algebra over the two scalar fields. Exact mode is bit-exact;
// float mode makes every zero/sign decision through Field<double>.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "gptlab/errors.hpp"
#include "gptlab/kernels.hpp"
#include "gptlab/scalar.hpp"

namespace gptlab {

template <class F>
using Vec = std::vector<F>;

template <class F>
Vec<F> zeros(std::size_t n) {
  return Vec<F>(n, F(0));
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot of unequal lengths");
  F acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double dot(const Vec<double>& a, const Vec<double>& b) { return kernels::dot(a, b); }

template <class F>
Vec<F> add(const Vec<F>& a, const Vec<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "add of unequal lengths");
  Vec<F> out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

template <class F>
Vec<F> sub(const Vec<F>& a, const Vec<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "sub of unequal lengths");
  Vec<F> out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

template <class F>
Vec<F> scale(const Vec<F>& a, const F& s) {
  Vec<F> out(a);
  for (auto& x : out) x *= s;
  return out;
}

template <class F>
bool is_zero_vec(const Vec<F>& v) {
  return std::all_of(v.begin(), v.end(), [](const F& x) { return is_zero(x); });
}

template <class F>
double max_abs_diff(const Vec<F>& a, const Vec<F>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, Field<F>::to_double(Field<F>::abs(F(a[i] - b[i]))));
  }
  return worst;
}

inline double max_abs_diff(const Vec<double>& a, const Vec<double>& b) {
  return kernels::max_abs_diff(a, b);
}

/// Exact equality in exact mode; entrywise within `tol` in float mode.
template <class F>
bool vec_near(const Vec<F>& a, const Vec<F>& b, double tol = kMatchTolerance) {
  if (a.size() != b.size()) return false;
  if constexpr (scalar_mode<F>() == ScalarMode::exact) {
    return a == b;
  } else {
    return max_abs_diff(a, b) <= tol;
  }
}

/// Lexicographic order; float entries closer than the rank tolerance compare equal.
template <class F>
bool lex_less(const Vec<F>& a, const Vec<F>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    int s = sign(F(a[i] - b[i]));
    if (s != 0) return s < 0;
  }
  return a.size() < b.size();
}

template <class F>
Vec<F> tensor(const Vec<F>& a, const Vec<F>& b) {
  Vec<F> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

/// Row-major Kronecker product of the factors, first factor slowest.
template <class F>
Vec<F> tensor(std::span<const Vec<F>> factors) {
  Vec<F> out{F(1)};
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  static Matrix from_rows(std::span<const Vec<F>> rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
      std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    return m;
  }

  static Matrix from_columns(std::span<const Vec<F>> columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw Error(ErrorCode::DimensionMismatch, "ragged columns");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const F> row_span(std::size_t r) const {
    return std::span<const F>(data_).subspan(r * cols_, cols_);
  }
  std::span<F> row_mut(std::size_t r) { return std::span<F>(data_).subspan(r * cols_, cols_); }
  Vec<F> row(std::size_t r) const { return Vec<F>(row_span(r).begin(), row_span(r).end()); }
  Vec<F> col(std::size_t c) const {
    Vec<F> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  const std::vector<F>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Vec<F> apply(const Vec<F>& x) const {
    if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
    Vec<F> y(rows_, F(0));
    if constexpr (std::is_same_v<F, double>) {
      kernels::matvec(data_, rows_, cols_, x, y);
    } else {
      for (std::size_t r = 0; r < rows_; ++r) {
        F acc(0);
        for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
      }
    }
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
    Matrix out(a);
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Largest absolute entrywise difference (shapes must agree).
  double max_abs_diff(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix shapes");
    return gptlab::max_abs_diff(data_, other.data_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

/// Exact equality, or max-entry difference below the match tolerance in float mode.
template <class F>
bool matrix_near(const Matrix<F>& a, const Matrix<F>& b, double tol = kMatchTolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (scalar_mode<F>() == ScalarMode::exact) {
    return a == b;
  } else {
    return a.max_abs_diff(b) <= tol;
  }
}

template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

template <class F>
struct RrefResult {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Reduced row echelon form. Float mode pivots on the largest entry and throws
/// NumericallyDegenerate when a pivot decision is within a hair of the tolerance.
template <class F>
RrefResult<F> rref(Matrix<F> m);

template <class F>
std::size_t rank(const Matrix<F>& m);

/// Rank of a family of equal-length vectors.
template <class F>
std::size_t rank_of(std::span<const Vec<F>> vectors);

/// Kernel basis from the RREF: one vector per free column, with a 1 in that
/// column and zeros in every other free column.
template <class F>
std::vector<Vec<F>> nullspace(const Matrix<F>& m);

/// Some solution of a x = b, or nullopt if inconsistent.
template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& a, const Vec<F>& b);

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a);

/// Positive rescaling to a canonical representative of the ray: primitive
/// integer vector in exact mode, unit Euclidean norm in float mode.
template <class F>
Vec<F> canonical_ray(const Vec<F>& v);

/// Sort and deduplicate a list of (already canonical) vectors.
template <class F>
void sort_unique(std::vector<Vec<F>>& vs);

/// Lookup of vectors in a fixed list: exact match in exact mode, nearest match
/// within kMatchTolerance in float mode, rejecting ambiguous snaps.
template <class F>
class VectorIndex {
 public:
  VectorIndex() = default;
  explicit VectorIndex(std::vector<Vec<F>> entries);

  std::optional<std::size_t> find(const Vec<F>& v) const;
  std::size_t size() const { return entries_.size(); }
  const Vec<F>& at(std::size_t i) const { return entries_[i]; }

 private:
  struct LexLess {
    bool operator()(const Vec<F>& a, const Vec<F>& b) const { return a < b; }
  };
  std::vector<Vec<F>> entries_;
  std::map<Vec<F>, std::size_t, LexLess> exact_;
};

}  // namespace gptlab
