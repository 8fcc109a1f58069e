#pragma once

// Backtracking search for invertible linear maps carrying one finite vector
// configuration (with a distinguished unit vector) onto another.
//
// A basis is chosen among the source vectors; images are assigned to basis
// vectors one at a time. As soon as every basis vector in the expansion of some
// other source vector has an image, that vector's image is forced by linearity
// and must land on an unused target vector, so most branches die a few levels
// down. Optional colour invariants (complement partners with respect to the
// unit, three-element circuits, size and rank of the vector's connected
// component) restrict candidates further.

#include <cstddef>
#include <optional>
#include <vector>

#include "gptlab/errors.hpp"
#include "gptlab/linalg.hpp"

namespace gptlab {

struct SearchConfig {
  std::size_t node_cap = 50'000'000;
  unsigned workers = 1;
  bool symmetry_pruning = true;
  bool keep_matrices = true;  // false: only image permutations are returned
};

/// Thrown when a search exhausts its node cap; carries what was found so far.
class SearchBudgetExceeded : public Error {
 public:
  SearchBudgetExceeded(std::size_t nodes, std::size_t partial_results)
      : Error(ErrorCode::SearchBudgetExceeded,
              "node cap reached after " + std::to_string(nodes) + " nodes with " +
                  std::to_string(partial_results) + " results"),
        nodes_(nodes),
        partial_results_(partial_results) {}

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t partial_results() const noexcept { return partial_results_; }

 private:
  std::size_t nodes_;
  std::size_t partial_results_;
};

template <class F>
struct LinearIsomorphism {
  Matrix<F> matrix;                // maps source coordinates to target coordinates
  std::vector<std::size_t> image;  // image[j] = target index of matrix * source[j]
};

template <class F>
struct Configuration {
  std::vector<Vec<F>> vectors;
  Vec<F> unit;
};

/// All (or the first) invertible M with M * unit_src = unit_dst and M permuting
/// the source vectors onto the target vectors. `preferred_order` ranks source
/// vectors for basis selection (empty = index order). Results are sorted by
/// their image permutation.
template <class F>
std::vector<LinearIsomorphism<F>> find_linear_isomorphisms(const Configuration<F>& src, const Configuration<F>& dst,
                                                           const SearchConfig& cfg, bool first_only,
                                                           const std::vector<std::size_t>& preferred_order = {});

/// Per-vector invariants preserved by every unit-fixing linear isomorphism.
template <class F>
std::vector<std::vector<std::size_t>> configuration_colours(const Configuration<F>& config);

}  // namespace gptlab
