#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gptlab/cone.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab {

enum class SystemKind { classical, cube, octoplex, polygon, squashed_gtrit, custom };

std::string_view to_string(SystemKind kind);
std::optional<SystemKind> parse_system_kind(std::string_view text);

/// A single GPT system: effect and state cones, the unit effect, the
/// ray-extreme effects (normalized as extreme points of the proper-effect set,
/// in construction order) and the pure states (normalized, sorted).
template <class F>
struct LocalSystem {
  std::string name;
  SystemKind kind = SystemKind::custom;
  int parameter = 0;
  std::size_t dim = 0;
  Cone<F> effect_cone;
  Cone<F> state_cone;
  Vec<F> unit;
  std::vector<Vec<F>> ray_extremes;
  std::vector<Vec<F>> pure_states;
  // Index sets of ray-extremes that the construction claims sum to the unit.
  std::vector<std::vector<std::size_t>> declared_measurements;

  std::size_t ray_count() const { return ray_extremes.size(); }
  /// Classical systems have a simplex as state space.
  bool is_classical() const { return pure_states.size() == dim; }
};

/// Derives cones, pure states and normalized ray-extremes from a unit and a
/// list of effect directions. Zero and non-extreme directions are dropped.
template <class F>
LocalSystem<F> make_system(std::string name, Vec<F> unit, const std::vector<Vec<F>>& effect_directions,
                           std::vector<std::vector<std::size_t>> declared_measurements = {},
                           SystemKind kind = SystemKind::custom, int parameter = 0);

template <class F>
LocalSystem<F> build_classical(int n);
template <class F>
LocalSystem<F> build_cube(int d);
template <class F>
LocalSystem<F> build_octoplex(int d);
template <class F>
LocalSystem<F> build_squashed_gtrit();
/// Regular polygons need irrational coordinates, so they exist in float mode only.
LocalSystem<double> build_polygon(int n);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(std::string_view name) const;
};

template <class F>
ValidationReport validate_system(const LocalSystem<F>& s);

template <class F>
bool is_dichotomic(const LocalSystem<F>& s);

template <class F>
struct Measurement {
  std::vector<std::size_t> indices;  // multiset of ray-extreme indices, nondecreasing
  std::vector<Vec<F>> effects;
};

/// Multisets of at most max_r ray-extremes summing to the unit.
template <class F>
std::vector<Measurement<F>> fine_grained_measurements(const LocalSystem<F>& s, int max_r,
                                                      std::size_t node_cap = 10'000'000);

template <class F>
struct DecompositionComponent {
  std::vector<std::size_t> ray_indices;
  std::vector<Vec<F>> basis;  // independent subset of the component's rays
};

template <class F>
struct Decomposition {
  std::vector<DecompositionComponent<F>> components;  // ordered by smallest ray index
  bool brute_force_checked = false;
};

/// Finest direct-sum splitting of the effect cone's extreme rays.
template <class F>
Decomposition<F> reduce(const LocalSystem<F>& s);

/// Finest partition of the vectors into blocks whose spans form a direct sum,
/// by exhaustive search over set partitions (small inputs only). Blocks are
/// sorted lists of indices, ordered by first element.
template <class F>
std::vector<std::vector<std::size_t>> brute_force_finest_partition(const std::vector<Vec<F>>& vectors);

/// Adjoints of all unit-fixing linear maps permuting the ray-extremes.
template <class F>
std::vector<Matrix<F>> local_symmetry_group(const LocalSystem<F>& s, const SearchConfig& cfg = {});

/// A map carrying a's proper effects onto b's (unit to unit), if one exists.
template <class F>
std::optional<Matrix<F>> systems_equivalent(const LocalSystem<F>& a, const LocalSystem<F>& b,
                                            const SearchConfig& cfg = {});

/// Triples (e, f, g), f != g, with e in span{f, g} but e distinct from both.
/// Empty for any genuine ray-extreme family.
template <class F>
std::vector<std::array<std::size_t, 3>> ray_span_violations(const std::vector<Vec<F>>& rays);

template <class F>
Configuration<F> effect_configuration(const LocalSystem<F>& s) {
  return {s.ray_extremes, s.unit};
}

}  // namespace gptlab
