#include "gptlab/lp.hpp"

#include <cmath>

namespace gptlab {

namespace {

// Loose float acceptance for re-verifying solutions; rank decisions inside the
// simplex still use the global tolerance.
constexpr double kResidualTolerance = 1e-7;

}  // namespace

template <class F>
FeasibilityResult<F> solve_feasibility(const Matrix<F>& a, const Vec<F>& b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "feasibility: rhs length");

  // Tableau [D A | I | D b] with D flipping rows so the rhs is nonnegative.
  const std::size_t width = n + m;
  Matrix<F> t(m, width + 1);
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (sign(b[i]) < 0) flip[i] = -1;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = flip[i] < 0 ? F(-a(i, j)) : a(i, j);
    t(i, n + i) = F(1);
    t(i, width) = flip[i] < 0 ? F(-b[i]) : b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced costs of the phase-one objective (sum of artificials); last entry is -value.
  Vec<F> obj(width + 1, F(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) obj[j] -= t(i, j);
    obj[width] -= t(i, width);
  }

  const std::size_t max_iterations = 50 * (width + 1) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iterations) throw Error(ErrorCode::NumericallyDegenerate, "simplex iteration cap reached");
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (sign(obj[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    F best_ratio(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (sign(t(i, enter)) <= 0) continue;
      F ratio = t(i, width) / t(i, enter);
      if (leave == m) {
        leave = i;
        best_ratio = ratio;
        continue;
      }
      const int cmp = sign(F(ratio - best_ratio));
      if (cmp < 0 || (cmp == 0 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    // Phase one is bounded below by zero, so an entering column always has a leaving row.
    if (leave == m) throw Error(ErrorCode::NumericallyDegenerate, "unbounded phase-one direction");

    const F pivot = t(leave, enter);
    for (std::size_t j = 0; j <= width; ++j) t(leave, j) /= pivot;
    t(leave, enter) = F(1);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || is_zero(t(i, enter))) continue;
      const F factor = t(i, enter);
      for (std::size_t j = 0; j <= width; ++j) {
        if (!is_zero(t(leave, j))) t(i, j) -= factor * t(leave, j);
      }
      t(i, enter) = F(0);
    }
    if (!is_zero(obj[enter])) {
      const F factor = obj[enter];
      for (std::size_t j = 0; j <= width; ++j) {
        if (!is_zero(t(leave, j))) obj[j] -= factor * t(leave, j);
      }
      obj[enter] = F(0);
    }
    basis[leave] = enter;
  }

  FeasibilityResult<F> result;
  const F value = -obj[width];
  bool feasible = sign(value) <= 0;
  if constexpr (scalar_mode<F>() == ScalarMode::floating) {
    double scale = 1.0;
    for (double x : b) scale = std::max(scale, std::fabs(x));
    feasible = value <= float_eps() * scale;
  }

  if (feasible) {
    Vec<F> x(n, F(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) x[basis[i]] = t(i, width);
    }
    const Vec<F> residual = sub(a.apply(x), b);
    if constexpr (scalar_mode<F>() == ScalarMode::exact) {
      if (!is_zero_vec(residual)) throw Error(ErrorCode::NumericallyDegenerate, "exact simplex residual nonzero");
    } else {
      for (double r : residual) {
        if (std::fabs(r) > kResidualTolerance) {
          throw Error(ErrorCode::NumericallyDegenerate, "simplex solution residual above tolerance");
        }
      }
      for (auto& xi : x) xi = std::max(xi, 0.0);
    }
    result.feasible = true;
    result.solution = std::move(x);
    return result;
  }

  // Simplex multipliers y_k = 1 - reduced cost of artificial k; the witness is -D y.
  Vec<F> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    F y = F(1) - obj[n + k];
    w[k] = flip[k] < 0 ? y : F(-y);
  }
  const Vec<F> atw = a.transpose().apply(w);
  bool ok = sign(dot(b, w)) < 0;
  for (const auto& v : atw) {
    if constexpr (scalar_mode<F>() == ScalarMode::exact) {
      ok = ok && sgn(v) >= 0;
    } else {
      ok = ok && v >= -kResidualTolerance;
    }
  }
  if (!ok) throw Error(ErrorCode::NumericallyDegenerate, "Farkas witness failed re-verification");
  result.farkas = std::move(w);
  return result;
}

template FeasibilityResult<Rational> solve_feasibility<Rational>(const Matrix<Rational>&, const Vec<Rational>&);
template FeasibilityResult<double> solve_feasibility<double>(const Matrix<double>&, const Vec<double>&);

}  // namespace gptlab
