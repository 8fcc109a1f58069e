#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gptlab/composite.hpp"

namespace gptlab {

inline constexpr std::size_t kEnumerationRayCap = 36;

/// A transformation is stored through its adjoint (the action on effects).
template <class F>
struct Transformation {
  Matrix<F> adjoint;
  std::vector<std::size_t> ray_image;  // adjoint * ray j = ray ray_image[j]; empty if unknown

  /// Action on states: the transpose of the adjoint under the standard inner product.
  Matrix<F> forward() const { return adjoint.transpose(); }
};

/// Image permutation of the composite ray-extremes, if the adjoint permutes them.
template <class F>
std::optional<std::vector<std::size_t>> ray_permutation(const CompositeSystem<F>& c, const Matrix<F>& adjoint);

template <class F>
bool is_allowed_reversible(const CompositeSystem<F>& c, const Transformation<F>& t);

/// Checks the forward map keeps pure product states (and, for small composites,
/// every state-polytope vertex) inside the state cone.
template <class F>
bool preserves_state_cone(const CompositeSystem<F>& c, const Transformation<F>& t);

template <class F>
bool is_adjacency_preserving(const CompositeSystem<F>& c, const Transformation<F>& t);

template <class F>
struct TrivialityCertificate {
  std::vector<std::size_t> sigma;  // one-line, 1-based: subsystem i is carried to sigma[i-1]
  std::vector<Matrix<F>> maps;     // maps[i]: effects of subsystem i+1 to effects of subsystem sigma[i]
  double residual = 0.0;           // max |P - T^dagger| after recomposition
  bool residual_ok = false;
};

/// Adjoint of the trivial transformation described by (sigma, maps).
template <class F>
Matrix<F> recompose(const CompositeSystem<F>& c, const std::vector<std::size_t>& sigma,
                    const std::vector<Matrix<F>>& maps);

template <class F>
std::optional<TrivialityCertificate<F>> triviality_certificate(const CompositeSystem<F>& c,
                                                               const Transformation<F>& t);

template <class F>
bool subunit_criterion(const CompositeSystem<F>& c, const Transformation<F>& t);

/// Unordered pairs {i <= j} of vectors from `rays` with rays[i] + rays[j] = v.
/// A pair with i == j is the degenerate doubled effect.
template <class F>
std::vector<std::pair<std::size_t, std::size_t>> two_term_decompositions(const std::vector<Vec<F>>& rays,
                                                                         const Vec<F>& v);

template <class F>
std::vector<std::pair<std::size_t, std::size_t>> two_term_decompositions(const CompositeSystem<F>& c,
                                                                         const Vec<F>& v) {
  return two_term_decompositions(c.ray_extremes, v);
}

/// Ray order used to choose search bases: by Hamming distance from the first tuple.
template <class F>
std::vector<std::size_t> hamming_order(const CompositeSystem<F>& c);

template <class F>
std::vector<Transformation<F>> enumerate_reversibles(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

/// Number of reversibles without building their matrices.
template <class F>
std::size_t count_reversibles(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

/// Non-identity local symmetry used by default for conditional constructions:
/// the first central involution of the group, else the first non-identity element.
template <class F>
Matrix<F> default_conditional_symmetry(const LocalSystem<F>& s, const SearchConfig& cfg = {});

/// Acts as t_local on `target` exactly when `control` lies in its first
/// reducibility block (the one containing ray 0). Indices are 1-based.
template <class F>
Transformation<F> build_conditional_cnot(const CompositeSystem<F>& c, std::size_t control, std::size_t target,
                                         const Matrix<F>& t_local);

template <class F>
struct AuditReport {
  bool permutes_product_states = false;
  std::vector<std::size_t> permutation;         // image index per product state
  std::optional<std::size_t> violating_state;   // first product state whose image is not a product state
  bool separable_to_entangled = false;
  std::optional<std::size_t> entangled_image_of;
  // A product input (one slot mixed) whose image is separable but not a product.
  std::optional<Vec<F>> correlated_input;
  std::optional<Vec<F>> correlated_output;
  std::size_t mixed_slot = 0;                   // 1-based slot carrying the mixed marginal
};

template <class F>
AuditReport<F> entanglement_audit(const CompositeSystem<F>& c, const Transformation<F>& t);

struct TheoremReport {
  std::size_t enumerated = 0;
  std::size_t trivial_group_order = 0;
  std::size_t certified = 0;
  std::vector<std::size_t> local_group_orders;
  std::vector<std::vector<std::size_t>> equivalence_classes;  // 1-based subsystem indices
  std::size_t subunit_checks = 0;
  std::size_t proof_path_failures = 0;
  std::size_t factor_checks = 0;
  std::size_t factor_failures = 0;
  bool pass = false;
};

template <class F>
TheoremReport verify_theorem1(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

/// Checked by direct linear algebra: given sum x_i (x) y_i = sum w_j (x) z_j
/// with the x_i independent, each y_i lies in span{z_j}. Returns false only if the
/// hypotheses hold and the conclusion fails; nullopt if the hypotheses do not hold.
template <class F>
std::optional<bool> tensor_factors_agree(const std::vector<Vec<F>>& xs, const std::vector<Vec<F>>& ys,
                                        const std::vector<Vec<F>>& ws, const std::vector<Vec<F>>& zs);

}  // namespace gptlab
