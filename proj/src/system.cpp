#include "gptlab/system.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace gptlab {

namespace {

constexpr std::size_t kBruteForceRayLimit = 10;

template <class F>
bool near_value(const F& x, const F& target) {
  if constexpr (scalar_mode<F>() == ScalarMode::exact) {
    return x == target;
  } else {
    return std::fabs(x - target) <= 10.0 * float_eps();
  }
}

template <class F>
std::string describe(const Vec<F>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_scalar(v[i]);
  }
  return out + ")";
}

template <class F>
Vec<F> basis_vector(std::size_t dim, std::size_t k) {
  Vec<F> v(dim, F(0));
  v[k] = F(1);
  return v;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::classical: return "classical";
    case SystemKind::cube: return "cube";
    case SystemKind::octoplex: return "octoplex";
    case SystemKind::polygon: return "polygon";
    case SystemKind::squashed_gtrit: return "squashed-gtrit";
    case SystemKind::custom: return "custom";
  }
  return "custom";
}

std::optional<SystemKind> parse_system_kind(std::string_view text) {
  for (auto kind : {SystemKind::classical, SystemKind::cube, SystemKind::octoplex, SystemKind::polygon,
                    SystemKind::squashed_gtrit, SystemKind::custom}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

template <class F>
LocalSystem<F> make_system(std::string name, Vec<F> unit, const std::vector<Vec<F>>& effect_directions,
                           std::vector<std::vector<std::size_t>> declared_measurements, SystemKind kind,
                           int parameter) {
  const std::size_t dim = unit.size();
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "empty unit effect");
  LocalSystem<F> s;
  s.name = std::move(name);
  s.kind = kind;
  s.parameter = parameter;
  s.dim = dim;
  s.unit = std::move(unit);
  s.declared_measurements = std::move(declared_measurements);

  const Cone<F> directions(effect_directions, dim);
  s.state_cone = dual_cone(directions);
  for (const auto& ray : s.state_cone.generators()) {
    const F norm = dot(s.unit, ray);
    if (sign(norm) <= 0) throw Error(ErrorCode::InvalidParameter, "unit effect is not interior to the effect cone");
    s.pure_states.push_back(scale(ray, F(F(1) / norm)));
  }
  sort_unique(s.pure_states);

  // Keep construction order; drop zeros, repeats and directions that are not extreme.
  std::vector<Vec<F>> seen;
  for (const auto& d : effect_directions) {
    if (d.size() != dim) throw Error(ErrorCode::DimensionMismatch, "effect direction length");
    if (is_zero_vec(d)) continue;
    const Vec<F> canonical = canonical_ray(d);
    if (std::any_of(seen.begin(), seen.end(), [&](const auto& v) { return vec_near(v, canonical); })) continue;
    seen.push_back(canonical);
    if (!certify_extreme(d, s.state_cone.generators(), dim)) continue;
    F best(0);
    for (const auto& st : s.pure_states) best = std::max(best, F(dot(d, st)));
    s.ray_extremes.push_back(scale(d, F(F(1) / best)));
  }
  s.effect_cone = Cone<F>(s.ray_extremes, dim);
  return s;
}

template <class F>
LocalSystem<F> build_classical(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "classical system needs n >= 2");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<Vec<F>> effects;
  std::vector<std::size_t> all;
  for (std::size_t k = 0; k < dim; ++k) {
    effects.push_back(basis_vector<F>(dim, k));
    all.push_back(k);
  }
  return make_system<F>(fmt::format("classical-{}", n), Vec<F>(dim, F(1)), effects, {all}, SystemKind::classical,
                        n);
}

template <class F>
LocalSystem<F> build_cube(int d) {
  if (d < 2) throw Error(ErrorCode::InvalidParameter, "cube needs d >= 2");
  const auto dim = static_cast<std::size_t>(d) + 1;
  const F half = Field<F>::ratio(1, 2);
  std::vector<Vec<F>> effects;
  std::vector<std::vector<std::size_t>> measurements;
  for (std::size_t k = 1; k < dim; ++k) {
    for (int s : {1, -1}) {
      Vec<F> e(dim, F(0));
      e[0] = half;
      e[k] = s > 0 ? half : F(-half);
      effects.push_back(std::move(e));
    }
    measurements.push_back({effects.size() - 2, effects.size() - 1});
  }
  return make_system<F>(fmt::format("cube-{}", d), basis_vector<F>(dim, 0), effects, measurements, SystemKind::cube,
                        d);
}

template <class F>
LocalSystem<F> build_octoplex(int d) {
  if (d < 2) throw Error(ErrorCode::InvalidParameter, "octoplex needs d >= 2");
  const auto dim = static_cast<std::size_t>(d) + 1;
  const F half = Field<F>::ratio(1, 2);
  std::vector<Vec<F>> effects;
  const std::size_t count = std::size_t{1} << d;
  for (std::size_t bits = 0; bits < count; ++bits) {
    Vec<F> e(dim, half);
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
      if (bits & (std::size_t{1} << (d - 1 - k))) e[k + 1] = -half;
    }
    effects.push_back(std::move(e));
  }
  // bits and its complement are the two outcomes of one measurement.
  std::vector<std::vector<std::size_t>> measurements;
  for (std::size_t bits = 0; bits < count / 2; ++bits) measurements.push_back({bits, count - 1 - bits});
  return make_system<F>(fmt::format("octoplex-{}", d), basis_vector<F>(dim, 0), effects, measurements,
                        SystemKind::octoplex, d);
}

template <class F>
LocalSystem<F> build_squashed_gtrit() {
  const F third = Field<F>::ratio(1, 3);
  const F half = Field<F>::ratio(1, 2);
  const F one(1);
  const Vec<F> x{third, one, F(0), F(0)};
  const Vec<F> y0{third, F(-half), one, F(0)};
  const Vec<F> y1{third, F(-half), F(-one), F(0)};
  const Vec<F> z0{third, F(-half), F(0), one};
  const Vec<F> z1{third, F(-half), F(0), F(-one)};
  return make_system<F>("squashed-gtrit", basis_vector<F>(4, 0), {x, y0, y1, z0, z1}, {{0, 1, 2}, {0, 3, 4}},
                        SystemKind::squashed_gtrit, 0);
}

LocalSystem<double> build_polygon(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidParameter, "polygon needs n >= 3");
  const double pi = std::numbers::pi;
  const double r = std::sqrt(1.0 / std::cos(pi / n));
  std::vector<Vec<double>> effects;
  std::vector<std::vector<std::size_t>> measurements;
  if (n % 2 == 1) {
    const double c = 1.0 / (1.0 + r * r);
    for (int i = 1; i <= n; ++i) {
      const double angle = 2.0 * pi * i / n;
      effects.push_back({c, c * r * std::sin(angle), c * r * std::cos(angle)});
    }
  } else {
    // Effects sit between neighbouring states so that u - e_i = e_{i + n/2}.
    for (int i = 1; i <= n; ++i) {
      const double angle = (2.0 * i - 1.0) * pi / n;
      effects.push_back({0.5, 0.5 * r * std::sin(angle), 0.5 * r * std::cos(angle)});
    }
    for (int i = 0; i < n / 2; ++i) {
      measurements.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + n / 2)});
    }
  }
  return make_system<double>(fmt::format("polygon-{}", n), {1.0, 0.0, 0.0}, effects, measurements,
                             SystemKind::polygon, n);
}

template <class F>
ValidationReport validate_system(const LocalSystem<F>& s) {
  ValidationReport report;
  auto add = [&](std::string name, bool passed, std::string witness = {}) {
    report.checks.push_back({std::move(name), passed, passed ? std::string() : std::move(witness)});
  };

  bool shapes_ok = s.unit.size() == s.dim && !s.ray_extremes.empty() && !s.pure_states.empty();
  for (const auto& e : s.ray_extremes) shapes_ok = shapes_ok && e.size() == s.dim;
  for (const auto& p : s.pure_states) shapes_ok = shapes_ok && p.size() == s.dim;
  add("shapes", shapes_ok, "vector lengths disagree with the system dimension");
  if (!shapes_ok) return report;

  const Cone<F> effects(s.ray_extremes, s.dim);
  const Cone<F> states(s.pure_states, s.dim);
  try {
    add("state-cone-is-dual", dual_cone(effects) == states, "dual of the effect cone differs from the pure states");
  } catch (const Error& e) {
    add("state-cone-is-dual", false, e.what());
  }
  try {
    add("effect-cone-is-dual", dual_cone(states) == effects, "dual of the state cone differs from the ray-extremes");
  } catch (const Error& e) {
    add("effect-cone-is-dual", false, e.what());
  }

  {
    std::string witness;
    for (const auto& p : s.pure_states) {
      if (!near_value(F(dot(s.unit, p)), F(1))) {
        witness = "<u,s> = " + format_scalar(F(dot(s.unit, p))) + " at s = " + describe(p);
        break;
      }
    }
    add("unit-normalization", witness.empty(), witness);
  }
  {
    std::string witness;
    for (const auto& p : s.pure_states) {
      if (sign(F(dot(s.unit, p))) <= 0) {
        witness = "unit not strictly positive on s = " + describe(p);
        break;
      }
    }
    add("unit-interior", witness.empty(), witness);
  }
  {
    std::string witness;
    for (std::size_t i = 0; i < s.ray_extremes.size() && witness.empty(); ++i) {
      for (const auto& p : s.pure_states) {
        const F v = dot(s.ray_extremes[i], p);
        if (sign(v) < 0 || sign(F(v - F(1))) > 0) {
          witness = fmt::format("<e{},s> = {} at s = {}", i, format_scalar(v), describe(p));
          break;
        }
      }
    }
    add("effect-bounds", witness.empty(), witness);
  }
  {
    std::string witness;
    for (std::size_t i = 0; i < s.ray_extremes.size(); ++i) {
      if (!certify_extreme(s.ray_extremes[i], s.pure_states, s.dim)) {
        witness = fmt::format("e{} = {} is not on an extreme ray", i, describe(s.ray_extremes[i]));
        break;
      }
    }
    add("ray-extremality", witness.empty(), witness);
  }
  {
    std::string witness;
    for (std::size_t i = 0; i < s.ray_extremes.size(); ++i) {
      F best(0);
      for (const auto& p : s.pure_states) best = std::max(best, F(dot(s.ray_extremes[i], p)));
      if (!near_value(best, F(1))) {
        witness = fmt::format("max_s <e{},s> = {}", i, format_scalar(best));
        break;
      }
    }
    add("proper-extreme-point", witness.empty(), witness);
  }
  {
    std::string witness;
    for (const auto& m : s.declared_measurements) {
      Vec<F> total(s.dim, F(0));
      bool in_range = true;
      for (auto i : m) {
        if (i >= s.ray_extremes.size()) {
          in_range = false;
          break;
        }
        total = gptlab::add(total, s.ray_extremes[i]);
      }
      if (!in_range || !vec_near(total, s.unit, 10.0 * float_eps())) {
        witness = "declared measurement sums to " + describe(total);
        break;
      }
    }
    add("unit-decomposition", witness.empty(), witness);
  }
  return report;
}

template <class F>
bool is_dichotomic(const LocalSystem<F>& s) {
  const VectorIndex<F> index(s.ray_extremes);
  return std::all_of(s.ray_extremes.begin(), s.ray_extremes.end(),
                     [&](const Vec<F>& e) { return index.find(sub(s.unit, e)).has_value(); });
}

template <class F>
std::vector<Measurement<F>> fine_grained_measurements(const LocalSystem<F>& s, int max_r, std::size_t node_cap) {
  if (max_r < 1 || max_r > 4) throw Error(ErrorCode::InvalidParameter, "max_r must be in 1..4");
  std::vector<Measurement<F>> out;
  std::vector<std::size_t> chosen;
  std::size_t nodes = 0;
  std::function<void(std::size_t, const Vec<F>&)> extend = [&](std::size_t start, const Vec<F>& total) {
    for (std::size_t i = start; i < s.ray_extremes.size(); ++i) {
      if (++nodes > node_cap) throw SearchBudgetExceeded(nodes, out.size());
      chosen.push_back(i);
      const Vec<F> next = add(total, s.ray_extremes[i]);
      if (vec_near(next, s.unit)) {
        Measurement<F> m{chosen, {}};
        for (auto j : chosen) m.effects.push_back(s.ray_extremes[j]);
        out.push_back(std::move(m));
      } else if (chosen.size() < static_cast<std::size_t>(max_r)) {
        extend(i, next);
      }
      chosen.pop_back();
    }
  };
  extend(0, Vec<F>(s.dim, F(0)));
  return out;
}

template <class F>
std::vector<std::vector<std::size_t>> brute_force_finest_partition(const std::vector<Vec<F>>& vectors) {
  const std::size_t m = vectors.size();
  if (m == 0) return {};
  if (m > kBruteForceRayLimit) throw Error(ErrorCode::TooLarge, "brute-force partition search limited to 10 vectors");
  std::vector<std::size_t> subset_rank(std::size_t{1} << m, 0);
  for (std::size_t mask = 1; mask < subset_rank.size(); ++mask) {
    std::vector<Vec<F>> members;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::size_t{1} << i)) members.push_back(vectors[i]);
    }
    subset_rank[mask] = rank_of<F>(members);
  }
  const std::size_t total_rank = subset_rank.back();

  // Restricted growth strings enumerate each set partition once.
  std::vector<std::size_t> block_of(m, 0);
  std::vector<std::size_t> best;
  std::size_t best_blocks = 0;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t blocks) {
    if (i == m) {
      std::vector<std::size_t> masks(blocks, 0);
      for (std::size_t j = 0; j < m; ++j) masks[block_of[j]] |= std::size_t{1} << j;
      std::size_t sum = 0;
      for (auto mask : masks) sum += subset_rank[mask];
      if (sum == total_rank && blocks > best_blocks) {
        best_blocks = blocks;
        best = block_of;
      }
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      block_of[i] = b;
      walk(i + 1, std::max(blocks, b + 1));
    }
  };
  walk(0, 0);

  std::vector<std::vector<std::size_t>> out(best_blocks);
  for (std::size_t j = 0; j < m; ++j) out[best[j]].push_back(j);
  return out;
}

template <class F>
Decomposition<F> reduce(const LocalSystem<F>& s) {
  const auto& rays = s.ray_extremes;
  const std::size_t m = rays.size();
  const Matrix<F> columns = Matrix<F>::from_columns(rays, s.dim);
  UnionFind uf(m);
  // Each kernel vector from the RREF is a fundamental circuit; circuits sharing
  // an element lie in the same connected component.
  for (const auto& k : nullspace(columns)) {
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_zero(k[i])) continue;
      if (first) {
        uf.unite(*first, i);
      } else {
        first = i;
      }
    }
  }
  Decomposition<F> out;
  std::vector<std::size_t> slot(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == m) {
      slot[root] = out.components.size();
      out.components.emplace_back();
    }
    out.components[slot[root]].ray_indices.push_back(i);
  }

  std::size_t rank_sum = 0;
  for (auto& comp : out.components) {
    std::vector<Vec<F>> members;
    for (auto i : comp.ray_indices) {
      members.push_back(rays[i]);
      if (rank_of<F>(members) == members.size()) {
        comp.basis.push_back(rays[i]);
      } else {
        members.pop_back();
      }
    }
    rank_sum += comp.basis.size();
  }
  if (rank_sum != s.dim || rank_of<F>(rays) != s.dim) {
    throw Error(ErrorCode::DecompositionInconsistent, "component spans do not form a direct sum of the space");
  }

  if (m <= kBruteForceRayLimit) {
    const auto finest = brute_force_finest_partition(rays);
    std::vector<std::vector<std::size_t>> ours;
    for (const auto& comp : out.components) ours.push_back(comp.ray_indices);
    if (ours != finest) {
      throw Error(ErrorCode::DecompositionInconsistent, "partition differs from the brute-force finest partition");
    }
    out.brute_force_checked = true;
  }
  return out;
}

template <class F>
std::vector<Matrix<F>> local_symmetry_group(const LocalSystem<F>& s, const SearchConfig& cfg) {
  const auto config = effect_configuration(s);
  std::vector<Matrix<F>> out;
  for (auto& iso : find_linear_isomorphisms(config, config, cfg, false)) out.push_back(std::move(iso.matrix));
  return out;
}

template <class F>
std::optional<Matrix<F>> systems_equivalent(const LocalSystem<F>& a, const LocalSystem<F>& b,
                                            const SearchConfig& cfg) {
  if (a.dim != b.dim || a.ray_count() != b.ray_count()) return std::nullopt;
  auto found = find_linear_isomorphisms(effect_configuration(a), effect_configuration(b), cfg, true);
  if (found.empty()) return std::nullopt;
  return std::move(found.front().matrix);
}

template <class F>
std::vector<std::array<std::size_t, 3>> ray_span_violations(const std::vector<Vec<F>>& rays) {
  std::vector<std::array<std::size_t, 3>> out;
  const std::size_t m = rays.size();
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t g = f + 1; g < m; ++g) {
      const std::vector<Vec<F>> pair{rays[f], rays[g]};
      const std::size_t pair_rank = rank_of<F>(pair);
      for (std::size_t e = 0; e < m; ++e) {
        if (e == f || e == g) continue;
        const std::vector<Vec<F>> triple{rays[f], rays[g], rays[e]};
        if (rank_of<F>(triple) == pair_rank) out.push_back({e, f, g});
      }
    }
  }
  return out;
}

#define GPTLAB_INSTANTIATE_SYSTEM(F)                                                                            \
  template LocalSystem<F> make_system<F>(std::string, Vec<F>, const std::vector<Vec<F>>&,                      \
                                         std::vector<std::vector<std::size_t>>, SystemKind, int);               \
  template LocalSystem<F> build_classical<F>(int);                                                              \
  template LocalSystem<F> build_cube<F>(int);                                                                   \
  template LocalSystem<F> build_octoplex<F>(int);                                                               \
  template LocalSystem<F> build_squashed_gtrit<F>();                                                            \
  template ValidationReport validate_system<F>(const LocalSystem<F>&);                                          \
  template bool is_dichotomic<F>(const LocalSystem<F>&);                                                        \
  template std::vector<Measurement<F>> fine_grained_measurements<F>(const LocalSystem<F>&, int, std::size_t);  \
  template std::vector<std::vector<std::size_t>> brute_force_finest_partition<F>(const std::vector<Vec<F>>&);   \
  template Decomposition<F> reduce<F>(const LocalSystem<F>&);                                                   \
  template std::vector<Matrix<F>> local_symmetry_group<F>(const LocalSystem<F>&, const SearchConfig&);          \
  template std::optional<Matrix<F>> systems_equivalent<F>(const LocalSystem<F>&, const LocalSystem<F>&,         \
                                                          const SearchConfig&);                                 \
  template std::vector<std::array<std::size_t, 3>> ray_span_violations<F>(const std::vector<Vec<F>>&);

GPTLAB_INSTANTIATE_SYSTEM(Rational)
GPTLAB_INSTANTIATE_SYSTEM(double)

}  // namespace gptlab
