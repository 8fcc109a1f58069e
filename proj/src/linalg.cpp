#include "gptlab/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace gptlab {

namespace {

// Pivots whose magnitude lands in (tol, kDegenerateBand * tol] are neither
// clearly zero nor clearly nonzero.
constexpr double kDegenerateBand = 100.0;

template <class F>
void eliminate(std::span<F> target, const F& factor, std::span<const F> pivot_row) {
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!is_zero(pivot_row[i])) target[i] -= factor * pivot_row[i];
  }
}

template <>
void eliminate<double>(std::span<double> target, const double& factor, std::span<const double> pivot_row) {
  kernels::axpy(-factor, pivot_row, target);
}

}  // namespace

template <class F>
RrefResult<F> rref(Matrix<F> m) {
  RrefResult<F> out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  double tol = 0.0;
  if constexpr (scalar_mode<F>() == ScalarMode::floating) {
    double scale = 1.0;
    for (double x : m.data()) scale = std::max(scale, std::fabs(x));
    tol = float_eps() * scale;
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    if constexpr (scalar_mode<F>() == ScalarMode::exact) {
      for (std::size_t i = r; i < rows; ++i) {
        if (sgn(m(i, c)) != 0) {
          best = i;
          break;
        }
      }
    } else {
      double best_abs = 0.0;
      for (std::size_t i = r; i < rows; ++i) {
        if (std::fabs(m(i, c)) > best_abs) {
          best_abs = std::fabs(m(i, c));
          best = i;
        }
      }
      if (best_abs <= tol) {
        for (std::size_t i = r; i < rows; ++i) m(i, c) = 0.0;
        best = rows;
      } else if (best_abs <= kDegenerateBand * tol) {
        throw Error(ErrorCode::NumericallyDegenerate, "pivot magnitude within the tolerance band");
      }
    }
    if (best == rows) continue;
    if (best != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(best, j));
    }
    const F inv = F(1) / m(r, c);
    for (std::size_t j = 0; j < cols; ++j) m(r, j) *= inv;
    m(r, c) = F(1);
    const Vec<F> pivot_row = m.row(r);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const F factor = m(i, c);
      eliminate<F>(m.row_mut(i), factor, pivot_row);
      m(i, c) = F(0);
    }
    out.pivots.push_back(c);
    ++r;
  }
  if constexpr (scalar_mode<F>() == ScalarMode::floating) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (auto& x : m.row_mut(i)) {
        if (std::fabs(x) <= tol) x = 0.0;
      }
    }
  }
  out.reduced = std::move(m);
  return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).pivots.size();
}

template <class F>
std::size_t rank_of(std::span<const Vec<F>> vectors) {
  if (vectors.empty()) return 0;
  return rank(Matrix<F>::from_rows(vectors, vectors.front().size()));
}

template <class F>
std::vector<Vec<F>> nullspace(const Matrix<F>& m) {
  const auto [reduced, pivots] = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(cols, F(0));
    v[free] = F(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -reduced(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& a, const Vec<F>& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: rhs length");
  Matrix<F> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto [reduced, pivots] = rref(std::move(aug));
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vec<F> x(a.cols(), F(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = reduced(i, a.cols());
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = F(1);
  }
  const auto [reduced, pivots] = rref(std::move(aug));
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<F> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = reduced(i, n + j);
  return inv;
}

template <>
Vec<Rational> canonical_ray<Rational>(const Vec<Rational>& v) {
  mpz_class lcm_den = 1;
  for (const auto& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class scaled = x.get_num() * (lcm_den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
  }
  if (g == 0) return v;
  Vec<Rational> out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(mpz_class(x.get_num() * (lcm_den / x.get_den()) / g));
  return out;
}

template <>
Vec<double> canonical_ray<double>(const Vec<double>& v) {
  const double norm = std::sqrt(kernels::dot(v, v));
  if (norm <= float_eps()) return v;
  Vec<double> out(v);
  for (auto& x : out) {
    x /= norm;
    if (std::fabs(x) <= float_eps()) x = 0.0;
  }
  return out;
}

template <class F>
void sort_unique(std::vector<Vec<F>>& vs) {
  std::sort(vs.begin(), vs.end(), [](const Vec<F>& a, const Vec<F>& b) { return lex_less(a, b); });
  vs.erase(std::unique(vs.begin(), vs.end(), [](const Vec<F>& a, const Vec<F>& b) { return vec_near(a, b); }),
           vs.end());
}

template <class F>
VectorIndex<F>::VectorIndex(std::vector<Vec<F>> entries) : entries_(std::move(entries)) {
  if constexpr (scalar_mode<F>() == ScalarMode::exact) {
    for (std::size_t i = 0; i < entries_.size(); ++i) exact_.emplace(entries_[i], i);
  }
}

template <class F>
std::optional<std::size_t> VectorIndex<F>::find(const Vec<F>& v) const {
  if constexpr (scalar_mode<F>() == ScalarMode::exact) {
    auto it = exact_.find(v);
    if (it == exact_.end()) return std::nullopt;
    return it->second;
  } else {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].size() != v.size()) continue;
      const double d = gptlab::max_abs_diff(entries_[i], v);
      if (d < best) {
        second = best;
        best = d;
        best_index = i;
      } else if (d < second) {
        second = d;
      }
    }
    if (best > kMatchTolerance) return std::nullopt;
    if (second <= 10.0 * kMatchTolerance) {
      throw Error(ErrorCode::NumericallyDegenerate, "two canonical forms within the snapping radius");
    }
    return best_index;
  }
}

#define GPTLAB_INSTANTIATE_LINALG(F)                                       \
  template RrefResult<F> rref<F>(Matrix<F>);                               \
  template std::size_t rank<F>(const Matrix<F>&);                          \
  template std::size_t rank_of<F>(std::span<const Vec<F>>);                \
  template std::vector<Vec<F>> nullspace<F>(const Matrix<F>&);             \
  template std::optional<Vec<F>> solve<F>(const Matrix<F>&, const Vec<F>&); \
  template std::optional<Matrix<F>> inverse<F>(const Matrix<F>&);          \
  template void sort_unique<F>(std::vector<Vec<F>>&);                      \
  template class VectorIndex<F>;

GPTLAB_INSTANTIATE_LINALG(Rational)
GPTLAB_INSTANTIATE_LINALG(double)

}  // namespace gptlab
