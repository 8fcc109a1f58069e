#include "gptlab/composite.hpp"

#include <algorithm>

namespace gptlab {

namespace {

// Calls fn(tuple) for every tuple with tuple[k] < extents[k], first slot slowest.
template <class Fn>
void for_each_tuple(const std::vector<std::size_t>& extents, Fn&& fn) {
  std::vector<std::size_t> t(extents.size(), 0);
  for (auto e : extents) {
    if (e == 0) return;
  }
  while (true) {
    fn(t);
    std::size_t k = extents.size();
    while (k > 0) {
      --k;
      if (++t[k] < extents[k]) break;
      t[k] = 0;
      if (k == 0) return;
    }
    if (extents.empty()) return;
  }
}

template <class F>
std::vector<std::size_t> local_dims(const CompositeSystem<F>& c) {
  std::vector<std::size_t> dims;
  for (const auto& l : c.locals) dims.push_back(l.dim);
  return dims;
}

// table[k][a][b] = <e^k_a, s^k_b>
template <class F>
std::vector<std::vector<std::vector<F>>> local_tables(const CompositeSystem<F>& c) {
  std::vector<std::vector<std::vector<F>>> tables;
  for (const auto& l : c.locals) {
    std::vector<std::vector<F>> t(l.ray_extremes.size(), std::vector<F>(l.pure_states.size()));
    for (std::size_t a = 0; a < l.ray_extremes.size(); ++a) {
      for (std::size_t b = 0; b < l.pure_states.size(); ++b) t[a][b] = dot(l.ray_extremes[a], l.pure_states[b]);
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

template <class F>
ProductEffect<F> make_effect(const CompositeSystem<F>& c, const std::vector<std::size_t>& labels, EffectKind kind) {
  ProductEffect<F> e;
  e.labels = labels;
  e.kind = kind;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& l = c.locals[k];
    e.components.push_back(labels[k] == kUnitLabel ? l.unit : l.ray_extremes[labels[k]]);
  }
  e.flattened = tensor<F>(std::span<const Vec<F>>(e.components));
  return e;
}

void require_ray_kind(EffectKind a, EffectKind b) {
  if (a != EffectKind::ray_extreme || b != EffectKind::ray_extreme) {
    throw Error(ErrorCode::KindMismatch, "adjacency is defined for composite ray-extremes only");
  }
}

}  // namespace

template <class F>
std::size_t CompositeSystem<F>::tuple_index(const std::vector<std::size_t>& tuple) const {
  if (tuple.size() != locals.size()) throw Error(ErrorCode::DimensionMismatch, "tuple length");
  std::size_t index = 0;
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    const std::size_t n = locals[k].ray_count();
    if (tuple[k] >= n) throw Error(ErrorCode::IndexOutOfRange, "tuple entry out of range");
    index = index * n + tuple[k];
  }
  return index;
}

template <class F>
CompositeSystem<F> compose(const std::vector<LocalSystem<F>>& locals) {
  if (locals.size() < 2) throw Error(ErrorCode::TooSmall, "a composite needs at least two subsystems");
  std::size_t count = 1;
  for (const auto& l : locals) {
    if (!validate_system(l).ok()) throw Error(ErrorCode::InvalidParameter, "local system '" + l.name + "' fails validation");
    count *= l.ray_count();
    if (count > kMaxCompositeGenerators) throw Error(ErrorCode::TooLarge, "composite generator count above cap");
  }
  CompositeSystem<F> c;
  c.locals = locals;
  c.dim = 1;
  for (const auto& l : locals) c.dim *= l.dim;

  std::vector<Vec<F>> units;
  std::vector<std::size_t> ray_extents, state_extents;
  for (const auto& l : locals) {
    units.push_back(l.unit);
    ray_extents.push_back(l.ray_count());
    state_extents.push_back(l.pure_states.size());
  }
  c.unit = tensor<F>(std::span<const Vec<F>>(units));

  std::vector<Vec<F>> parts(locals.size());
  for_each_tuple(ray_extents, [&](const std::vector<std::size_t>& t) {
    for (std::size_t k = 0; k < t.size(); ++k) parts[k] = locals[k].ray_extremes[t[k]];
    c.ray_extremes.push_back(tensor<F>(std::span<const Vec<F>>(parts)));
    c.tuples.push_back(t);
  });
  for_each_tuple(state_extents, [&](const std::vector<std::size_t>& t) {
    for (std::size_t k = 0; k < t.size(); ++k) parts[k] = locals[k].pure_states[t[k]];
    c.product_states.push_back(tensor<F>(std::span<const Vec<F>>(parts)));
    c.state_tuples.push_back(t);
  });
  c.effect_cone = Cone<F>(c.ray_extremes, c.dim);
  return c;
}

template <class F>
ProductEffect<F> ray_effect(const CompositeSystem<F>& c, std::size_t index) {
  if (index >= c.ray_count()) throw Error(ErrorCode::IndexOutOfRange, "composite ray index");
  return make_effect(c, c.tuples[index], EffectKind::ray_extreme);
}

template <class F>
std::vector<ProductEffect<F>> composite_ray_extremes(const CompositeSystem<F>& c) {
  std::vector<ProductEffect<F>> out;
  out.reserve(c.ray_count());
  for (std::size_t j = 0; j < c.ray_count(); ++j) {
    // Product states lie in the state cone, so dim-1 independent tight ones certify an extreme ray.
    if (!certify_extreme(c.ray_extremes[j], c.product_states, c.dim)) {
      throw Error(ErrorCode::CertificateVerificationFailed, "composite ray-extreme failed extremality certificate");
    }
    out.push_back(make_effect(c, c.tuples[j], EffectKind::ray_extreme));
  }
  return out;
}

template <class F>
std::vector<ProductEffect<F>> sub_unit_effects(const CompositeSystem<F>& c, std::size_t i) {
  if (i < 1 || i > c.subsystem_count()) throw Error(ErrorCode::IndexOutOfRange, "subsystem index");
  std::vector<std::size_t> extents;
  for (std::size_t k = 0; k < c.subsystem_count(); ++k) extents.push_back(k + 1 == i ? 1 : c.locals[k].ray_count());
  std::vector<ProductEffect<F>> out;
  for_each_tuple(extents, [&](std::vector<std::size_t> t) {
    t[i - 1] = kUnitLabel;
    out.push_back(make_effect(c, t, EffectKind::sub_unit));
  });
  return out;
}

std::size_t tuple_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "tuple length");
  std::size_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += a[k] != b[k];
  return d;
}

std::optional<std::size_t> tuple_adjacency(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (tuple_distance(a, b) != 1) return std::nullopt;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return k + 1;
  }
  return std::nullopt;
}

template <class F>
std::optional<std::size_t> adjacency(const ProductEffect<F>& e, const ProductEffect<F>& f) {
  require_ray_kind(e.kind, f.kind);
  return tuple_adjacency(e.labels, f.labels);
}

template <class F>
std::size_t hamming_distance(const ProductEffect<F>& e, const ProductEffect<F>& f) {
  require_ray_kind(e.kind, f.kind);
  return tuple_distance(e.labels, f.labels);
}

template <class F>
std::vector<ProductEffect<F>> refiners_of_subunit(const CompositeSystem<F>& c, const ProductEffect<F>& E) {
  std::size_t slot = kUnitLabel;
  std::size_t units = 0;
  for (std::size_t k = 0; k < E.labels.size(); ++k) {
    if (E.labels[k] == kUnitLabel) {
      slot = k;
      ++units;
    }
  }
  if (E.kind != EffectKind::sub_unit || units != 1 || E.labels.size() != c.subsystem_count()) {
    throw Error(ErrorCode::KindMismatch, "refiners_of_subunit expects a sub-unit effect");
  }
  const auto tables = local_tables(c);
  std::vector<ProductEffect<F>> out;
  for (std::size_t j = 0; j < c.ray_count(); ++j) {
    const auto& t = c.tuples[j];
    // Cheap necessary condition: <r,s> <= <E,s> on every pure product state.
    bool possible = true;
    for (const auto& st : c.state_tuples) {
      F lhs(1), rhs(1);
      for (std::size_t k = 0; k < t.size(); ++k) {
        lhs *= tables[k][t[k]][st[k]];
        if (k != slot) rhs *= tables[k][E.labels[k]][st[k]];
      }
      if (sign(F(rhs - lhs)) < 0) {
        possible = false;
        break;
      }
    }
    if (!possible) continue;
    if (cone_leq(c.ray_extremes[j], E.flattened, c.effect_cone)) {
      out.push_back(make_effect(c, t, EffectKind::ray_extreme));
    }
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = a + 1; b < out.size(); ++b) {
      if (adjacency(out[a], out[b]) != slot + 1) {
        throw Error(ErrorCode::Lemma1Violation, "two refiners of a sub-unit effect are not adjacent at its unit slot");
      }
    }
  }
  return out;
}

template <class F>
std::vector<Vec<F>> pure_product_states(const CompositeSystem<F>& c) {
  for (const auto& s : c.product_states) {
    if (!certify_extreme(s, c.ray_extremes, c.dim)) {
      throw Error(ErrorCode::CertificateVerificationFailed, "product state is not a vertex");
    }
  }
  return c.product_states;
}

template <class F>
bool in_state_cone(const CompositeSystem<F>& c, const Vec<F>& s) {
  if (s.size() != c.dim) throw Error(ErrorCode::DimensionMismatch, "state length");
  return std::all_of(c.ray_extremes.begin(), c.ray_extremes.end(),
                     [&](const Vec<F>& r) { return sign(F(dot(r, s))) >= 0; });
}

template <class F>
Vec<F> marginalize(const CompositeSystem<F>& c, const Vec<F>& s, const std::vector<std::size_t>& keep) {
  const std::size_t n = c.subsystem_count();
  if (keep.empty()) throw Error(ErrorCode::InvalidParameter, "nothing to keep");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > n) throw Error(ErrorCode::IndexOutOfRange, "subsystem index");
    if (i > 0 && keep[i] <= keep[i - 1]) throw Error(ErrorCode::InvalidParameter, "keep must be strictly increasing");
  }
  if (!in_state_cone(c, s)) throw Error(ErrorCode::InvalidState, "vector is not in the composite state cone");

  std::vector<bool> kept(n, false);
  for (auto k : keep) kept[k - 1] = true;
  std::size_t out_dim = 1;
  for (auto k : keep) out_dim *= c.locals[k - 1].dim;
  Vec<F> out(out_dim, F(0));
  const auto dims = local_dims(c);
  std::size_t flat = 0;
  for_each_tuple(dims, [&](const std::vector<std::size_t>& t) {
    F coef = s[flat++];
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (kept[k]) {
        idx = idx * dims[k] + t[k];
      } else {
        coef *= c.locals[k].unit[t[k]];
      }
    }
    out[idx] += coef;
  });

  // The reduced state must be nonnegative on every product of kept ray-extremes.
  std::vector<std::size_t> extents;
  for (auto k : keep) extents.push_back(c.locals[k - 1].ray_count());
  bool valid = true;
  std::vector<Vec<F>> parts(keep.size());
  for_each_tuple(extents, [&](const std::vector<std::size_t>& t) {
    if (!valid) return;
    for (std::size_t i = 0; i < keep.size(); ++i) parts[i] = c.locals[keep[i] - 1].ray_extremes[t[i]];
    if (sign(F(dot(tensor<F>(std::span<const Vec<F>>(parts)), out))) < 0) valid = false;
  });
  if (!valid) throw Error(ErrorCode::InvalidState, "reduced state is not a valid state");
  return out;
}

template <class F>
bool is_separable(const CompositeSystem<F>& c, const Vec<F>& s) {
  if (!in_state_cone(c, s)) throw Error(ErrorCode::InvalidState, "vector is not in the composite state cone");
  const F norm = dot(c.unit, s);
  if (!vec_near(Vec<F>{norm}, Vec<F>{F(1)})) throw Error(ErrorCode::InvalidState, "state is not normalized");
  // Product states all have unit normalization, so cone membership is convex membership.
  return member(Cone<F>(c.product_states, c.dim), s);
}

template <class F>
bool is_product_vector(const CompositeSystem<F>& c, const Vec<F>& s) {
  if (s.size() != c.dim) throw Error(ErrorCode::DimensionMismatch, "state length");
  if (is_zero_vec(s)) return false;
  const auto dims = local_dims(c);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Matrix<F> m(dims[k], c.dim / dims[k]);
    std::vector<std::size_t> col_fill(dims[k], 0);
    std::size_t flat = 0;
    for_each_tuple(dims, [&](const std::vector<std::size_t>& t) {
      m(t[k], col_fill[t[k]]++) = s[flat++];
    });
    if (rank(m) > 1) return false;
  }
  return true;
}

template <class F>
std::vector<Vec<F>> state_polytope_vertices(const CompositeSystem<F>& c) {
  if (c.ray_count() > kVertexEnumerationCap) {
    throw Error(ErrorCode::TooLarge, "vertex enumeration limited to 32 composite generators");
  }
  const Cone<F> states = dual_cone(c.effect_cone);
  std::vector<Vec<F>> out;
  for (const auto& g : states.generators()) out.push_back(scale(g, F(F(1) / dot(c.unit, g))));
  sort_unique(out);
  return out;
}

template <class F>
std::size_t BehaviorTable<F>::index(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) const {
  if (x.size() != inputs.size() || a.size() != inputs.size()) throw Error(ErrorCode::DimensionMismatch, "party count");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] >= inputs[k]) throw Error(ErrorCode::IndexOutOfRange, "measurement index");
    idx = idx * inputs[k] + x[k];
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > 1) throw Error(ErrorCode::IndexOutOfRange, "outcome index");
    idx = idx * 2 + a[k];
  }
  return idx;
}

template <class F>
BehaviorTable<F> behavior_table(const CompositeSystem<F>& c, const Vec<F>& s) {
  for (const auto& l : c.locals) {
    if (l.kind != SystemKind::cube) throw Error(ErrorCode::NotCubeSystem, "behavior tables need cube subsystems");
  }
  if (s.size() != c.dim) throw Error(ErrorCode::DimensionMismatch, "state length");
  BehaviorTable<F> table;
  for (const auto& l : c.locals) table.inputs.push_back(static_cast<std::size_t>(l.parameter));
  const std::size_t n = c.subsystem_count();
  table.probs.assign(c.ray_count(), F(0));
  std::vector<std::size_t> outcome_extents(n, 2);
  std::vector<Vec<F>> parts(n);
  for_each_tuple(table.inputs, [&](const std::vector<std::size_t>& x) {
    for_each_tuple(outcome_extents, [&](const std::vector<std::size_t>& a) {
      // Cube effects are stored as (+, -) pairs per measurement axis.
      for (std::size_t k = 0; k < n; ++k) parts[k] = c.locals[k].ray_extremes[2 * x[k] + a[k]];
      table.probs[table.index(x, a)] = dot(tensor<F>(std::span<const Vec<F>>(parts)), s);
    });
  });
  return table;
}

template <class F>
bool is_non_signaling(const BehaviorTable<F>& t) {
  const std::size_t n = t.parties();
  std::vector<std::size_t> outcome_extents(n, 2);
  bool ok = true;
  for (std::size_t k = 0; k < n && ok; ++k) {
    for_each_tuple(t.inputs, [&](const std::vector<std::size_t>& x) {
      if (!ok || x[k] != 0) return;
      for (std::size_t alt = 1; alt < t.inputs[k] && ok; ++alt) {
        std::vector<std::size_t> y = x;
        y[k] = alt;
        for_each_tuple(outcome_extents, [&](const std::vector<std::size_t>& a) {
          if (!ok || a[k] != 0) return;
          // Marginal over party k must not depend on party k's input.
          F lhs(0), rhs(0);
          std::vector<std::size_t> b = a;
          for (std::size_t v = 0; v < 2; ++v) {
            b[k] = v;
            lhs += t.at(x, b);
            rhs += t.at(y, b);
          }
          if (!vec_near(Vec<F>{lhs}, Vec<F>{rhs})) ok = false;
        });
      }
    });
  }
  return ok;
}

template <class F>
F chsh_value(const BehaviorTable<F>& t) {
  if (t.inputs != std::vector<std::size_t>{2, 2}) {
    throw Error(ErrorCode::InvalidParameter, "CHSH needs two parties with two inputs each");
  }
  F corr[2][2];
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      F e(0);
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          if (a == b) {
            e += t.at({x, y}, {a, b});
          } else {
            e -= t.at({x, y}, {a, b});
          }
        }
      }
      corr[x][y] = e;
    }
  }
  F best(0);
  bool first = true;
  for (unsigned form = 0; form < 8; ++form) {
    const unsigned alpha = form & 1u, beta = (form >> 1) & 1u, gamma = (form >> 2) & 1u;
    F value(0);
    for (unsigned x = 0; x < 2; ++x) {
      for (unsigned y = 0; y < 2; ++y) {
        const unsigned parity = (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma;
        if (parity) {
          value -= corr[x][y];
        } else {
          value += corr[x][y];
        }
      }
    }
    if (first || value > best) best = value;
    first = false;
  }
  return best;
}

template <class F>
Vec<F> pr_box_analogue(const CompositeSystem<F>& c) {
  std::optional<Vec<F>> best;
  F best_value(0);
  for (const auto& v : state_polytope_vertices(c)) {
    if (is_separable(c, v)) continue;
    const F value = chsh_value(behavior_table(c, v));
    if (!best || sign(F(value - best_value)) > 0) {
      best = v;
      best_value = value;
    }
  }
  if (!best) throw Error(ErrorCode::InvalidParameter, "composite has no entangled vertex");
  return *best;
}

#define GPTLAB_INSTANTIATE_COMPOSITE(F)                                                                          \
  template struct CompositeSystem<F>;                                                                            \
  template struct BehaviorTable<F>;                                                                              \
  template CompositeSystem<F> compose<F>(const std::vector<LocalSystem<F>>&);                                    \
  template ProductEffect<F> ray_effect<F>(const CompositeSystem<F>&, std::size_t);                               \
  template std::vector<ProductEffect<F>> composite_ray_extremes<F>(const CompositeSystem<F>&);                   \
  template std::vector<ProductEffect<F>> sub_unit_effects<F>(const CompositeSystem<F>&, std::size_t);            \
  template std::optional<std::size_t> adjacency<F>(const ProductEffect<F>&, const ProductEffect<F>&);            \
  template std::size_t hamming_distance<F>(const ProductEffect<F>&, const ProductEffect<F>&);                    \
  template std::vector<ProductEffect<F>> refiners_of_subunit<F>(const CompositeSystem<F>&, const ProductEffect<F>&); \
  template std::vector<Vec<F>> pure_product_states<F>(const CompositeSystem<F>&);                                \
  template Vec<F> marginalize<F>(const CompositeSystem<F>&, const Vec<F>&, const std::vector<std::size_t>&);     \
  template bool in_state_cone<F>(const CompositeSystem<F>&, const Vec<F>&);                                      \
  template bool is_separable<F>(const CompositeSystem<F>&, const Vec<F>&);                                       \
  template bool is_product_vector<F>(const CompositeSystem<F>&, const Vec<F>&);                                  \
  template std::vector<Vec<F>> state_polytope_vertices<F>(const CompositeSystem<F>&);                            \
  template BehaviorTable<F> behavior_table<F>(const CompositeSystem<F>&, const Vec<F>&);                         \
  template bool is_non_signaling<F>(const BehaviorTable<F>&);                                                    \
  template F chsh_value<F>(const BehaviorTable<F>&);                                                             \
  template Vec<F> pr_box_analogue<F>(const CompositeSystem<F>&);

GPTLAB_INSTANTIATE_COMPOSITE(Rational)
GPTLAB_INSTANTIATE_COMPOSITE(double)

}  // namespace gptlab
