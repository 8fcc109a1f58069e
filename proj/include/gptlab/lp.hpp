#pragma once

#include <optional>

#include "gptlab/linalg.hpp"

namespace gptlab {

/// Outcome of the feasibility problem  A x = b, x >= 0.
template <class F>
struct FeasibilityResult {
  bool feasible = false;
  Vec<F> solution;  // x, when feasible
  Vec<F> farkas;    // y with A^T y >= 0 and b.y < 0, when infeasible
};

/// Phase-one simplex with Bland's rule. Exact in exact mode; in float mode the
/// residual objective is compared against the rank tolerance. Every returned
/// solution or Farkas witness is re-verified against the original data.
template <class F>
FeasibilityResult<F> solve_feasibility(const Matrix<F>& a, const Vec<F>& b);

}  // namespace gptlab
