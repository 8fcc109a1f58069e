#pragma once

// Max tensor product composites. Tuples of local ray-extreme indices are
// flattened row-major with the first subsystem slowest, the same order used
// for coordinates.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "gptlab/system.hpp"

namespace gptlab {

inline constexpr std::size_t kMaxCompositeGenerators = 100'000;
inline constexpr std::size_t kVertexEnumerationCap = 32;

template <class F>
struct CompositeSystem {
  std::vector<LocalSystem<F>> locals;
  std::size_t dim = 0;
  Vec<F> unit;
  Cone<F> effect_cone;
  std::vector<Vec<F>> ray_extremes;               // flattened, tuple order
  std::vector<std::vector<std::size_t>> tuples;  // local ray indices per composite ray
  std::vector<Vec<F>> product_states;            // tensor products of local pure states
  std::vector<std::vector<std::size_t>> state_tuples;

  std::size_t subsystem_count() const { return locals.size(); }
  std::size_t ray_count() const { return ray_extremes.size(); }
  std::size_t tuple_index(const std::vector<std::size_t>& tuple) const;
};

/// Marks the unit slot of a sub-unit effect.
inline constexpr std::size_t kUnitLabel = std::numeric_limits<std::size_t>::max();

enum class EffectKind { ray_extreme, sub_unit, general };

template <class F>
struct ProductEffect {
  std::vector<Vec<F>> components;
  std::vector<std::size_t> labels;  // local ray index, or kUnitLabel
  Vec<F> flattened;
  EffectKind kind = EffectKind::general;
};

template <class F>
CompositeSystem<F> compose(const std::vector<LocalSystem<F>>& locals);

template <class F>
ProductEffect<F> ray_effect(const CompositeSystem<F>& c, std::size_t index);

/// All composite ray-extremes, each certified extreme in the composite effect cone.
template <class F>
std::vector<ProductEffect<F>> composite_ray_extremes(const CompositeSystem<F>& c);

/// Sub-unit effects with the unit in slot i (1-based).
template <class F>
std::vector<ProductEffect<F>> sub_unit_effects(const CompositeSystem<F>& c, std::size_t i);

/// The single differing subsystem (1-based) of two ray-extremes, if exactly one differs.
template <class F>
std::optional<std::size_t> adjacency(const ProductEffect<F>& e, const ProductEffect<F>& f);

template <class F>
std::size_t hamming_distance(const ProductEffect<F>& e, const ProductEffect<F>& f);

std::size_t tuple_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);
std::optional<std::size_t> tuple_adjacency(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Composite ray-extremes r with r <= E in the effect cone, for a sub-unit E.
template <class F>
std::vector<ProductEffect<F>> refiners_of_subunit(const CompositeSystem<F>& c, const ProductEffect<F>& E);

/// Tensor products of local pure states, each certified a vertex.
template <class F>
std::vector<Vec<F>> pure_product_states(const CompositeSystem<F>& c);

/// Contracts discarded subsystems with their units. `keep` is 1-based and sorted.
template <class F>
Vec<F> marginalize(const CompositeSystem<F>& c, const Vec<F>& s, const std::vector<std::size_t>& keep);

template <class F>
bool in_state_cone(const CompositeSystem<F>& c, const Vec<F>& s);

template <class F>
bool is_separable(const CompositeSystem<F>& c, const Vec<F>& s);

/// Rank-one test across every single-subsystem cut.
template <class F>
bool is_product_vector(const CompositeSystem<F>& c, const Vec<F>& s);

/// Normalized vertices of the composite state polytope, sorted.
template <class F>
std::vector<Vec<F>> state_polytope_vertices(const CompositeSystem<F>& c);

/// P(a_1..a_N | x_1..x_N) for composites of cube systems.
template <class F>
struct BehaviorTable {
  std::vector<std::size_t> inputs;  // measurement count per party
  std::vector<F> probs;             // index [x_1]...[x_N][a_1]...[a_N], row-major

  std::size_t parties() const { return inputs.size(); }
  std::size_t index(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) const;
  const F& at(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) const {
    return probs[index(x, a)];
  }
};

template <class F>
BehaviorTable<F> behavior_table(const CompositeSystem<F>& c, const Vec<F>& s);

template <class F>
bool is_non_signaling(const BehaviorTable<F>& t);

/// Largest value over the eight relabelled CHSH expressions (bipartite, two inputs each).
template <class F>
F chsh_value(const BehaviorTable<F>& t);

/// Non-separable vertex with maximal CHSH value, lexicographically first.
template <class F>
Vec<F> pr_box_analogue(const CompositeSystem<F>& c);

}  // namespace gptlab
