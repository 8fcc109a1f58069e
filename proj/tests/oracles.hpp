#pragma once

// Brute-force reference computations used to cross-check library results.
// Plain doubles and small dense Gauss-Jordan only; nothing here calls into
// the library's search, LP or double-description code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using V = std::vector<double>;
using M = std::vector<V>;  // row-major

inline double dot(const V& a, const V& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool near(const V& a, const V& b, double tol = 1e-7) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

inline V kron(const V& a, const V& b) {
  V out;
  for (double x : a) {
    for (double y : b) out.push_back(x * y);
  }
  return out;
}

/// Solves A x = b for square A; nullopt when singular.
inline std::optional<V> solve(M a, V b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-10) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  V x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline std::size_t rank(M rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (std::fabs(rows[i][c]) > std::fabs(rows[piv][c])) piv = i;
    }
    if (std::fabs(rows[piv][c]) < 1e-9) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const double f = rows[i][c] / rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

/// Number of permutations p of `rays` realised by a linear map fixing `unit`
/// and sending rays[j] to rays[p[j]]. Tries all n! permutations.
inline std::size_t symmetry_order(const M& rays, const V& unit) {
  const std::size_t dim = unit.size();
  std::vector<std::size_t> basis;
  for (std::size_t j = 0; j < rays.size() && basis.size() < dim; ++j) {
    M trial;
    for (auto b : basis) trial.push_back(rays[b]);
    trial.push_back(rays[j]);
    if (rank(trial) == trial.size()) basis.push_back(j);
  }
  std::vector<std::size_t> perm(rays.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t count = 0;
  do {
    // Row k of the map: solve B^T m_k = (images)_k over the basis rays.
    M bt(dim, V(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) bt[i][k] = rays[basis[i]][k];
    }
    M map(dim);
    bool ok = true;
    for (std::size_t k = 0; k < dim && ok; ++k) {
      V rhs(dim);
      for (std::size_t i = 0; i < dim; ++i) rhs[i] = rays[perm[basis[i]]][k];
      auto row = solve(bt, rhs);
      if (!row) ok = false;
      else map[k] = *row;
    }
    auto apply = [&](const V& x) {
      V y(dim);
      for (std::size_t k = 0; k < dim; ++k) y[k] = dot(map[k], x);
      return y;
    };
    for (std::size_t j = 0; j < rays.size() && ok; ++j) ok = near(apply(rays[j]), rays[perm[j]]);
    if (ok) ok = near(apply(unit), unit);
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// Vertices of {s : <r, s> >= 0 for r in rays, <u, s> = 1} by trying every
/// (dim-1)-subset of tight constraints.
inline M polytope_vertices(const M& rays, const V& unit) {
  const std::size_t dim = unit.size();
  const std::size_t k = dim - 1;
  M out;
  std::vector<bool> pick(rays.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    M a;
    V b;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (pick[j]) {
        a.push_back(rays[j]);
        b.push_back(0.0);
      }
    }
    a.push_back(unit);
    b.push_back(1.0);
    const auto s = solve(a, b);
    if (!s) continue;
    bool feasible = true;
    for (const auto& r : rays) feasible = feasible && dot(r, *s) > -1e-9;
    if (!feasible) continue;
    bool fresh = true;
    for (const auto& v : out) fresh = fresh && !near(v, *s);
    if (fresh) out.push_back(*s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// CHSH with the four correlators read straight off the state: square
/// measurement x has outcomes e_{x,0} = (1, d_x)/2 and e_{x,1} = (1, -d_x)/2.
inline double square_chsh(const V& s) {
  const V u{1, 0, 0};
  auto effect = [&](std::size_t x, std::size_t a) {
    V e{0.5, 0.0, 0.0};
    e[1 + x] = a == 0 ? 0.5 : -0.5;
    return e;
  };
  double corr[2][2];
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      double c = 0.0;
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          const double p = dot(kron(effect(x, a), effect(y, b)), s);
          c += (a == b ? 1.0 : -1.0) * p;
        }
      }
      corr[x][y] = c;
    }
  }
  double best = 0.0;
  for (int flip = 0; flip < 4; ++flip) {
    const int fx = flip / 2, fy = flip % 2;
    double v = 0.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) v += ((x == fx && y == fy) ? -1.0 : 1.0) * corr[x][y];
    }
    best = std::max(best, std::fabs(v));
  }
  return best;
}

}  // namespace oracle
