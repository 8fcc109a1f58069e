#include "gptlab/cone.hpp"

#include <boost/dynamic_bitset.hpp>
#include <cmath>

namespace gptlab {

namespace {

constexpr double kDegenerateBand = 100.0;
// Above this many generators the double description of the dual is not attempted
// for extreme-ray filtering; LP redundancy tests are used instead.
constexpr std::size_t kDualRouteGeneratorCap = 32;

template <class F>
int classify(const F& value) {
  if constexpr (scalar_mode<F>() == ScalarMode::floating) {
    const double a = std::fabs(value);
    if (a > float_eps() && a <= kDegenerateBand * float_eps()) {
      throw Error(ErrorCode::NumericallyDegenerate, "inner product sign within the tolerance band");
    }
  }
  return sign(value);
}

template <class F>
std::vector<Vec<F>> canonical_nonzero(const std::vector<Vec<F>>& vs, std::size_t dim) {
  std::vector<Vec<F>> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    if (v.size() != dim) throw Error(ErrorCode::DimensionMismatch, "generator length differs from ambient dimension");
    if (is_zero_vec(v)) continue;
    out.push_back(canonical_ray(v));
  }
  sort_unique(out);
  return out;
}

template <class F>
Matrix<F> generator_columns(const std::vector<Vec<F>>& gens, std::size_t dim) {
  return Matrix<F>::from_columns(gens, dim);
}

}  // namespace

template <class F>
Cone<F>::Cone(std::vector<Vec<F>> generators, std::size_t ambient_dim)
    : dim_(ambient_dim), generators_(canonical_nonzero(generators, ambient_dim)) {}

template <class F>
const std::vector<Vec<F>>& Cone<F>::facets() const {
  std::lock_guard lock(cache_->mutex);
  if (!cache_->ready) {
    cache_->facets = double_description(generators_, dim_);
    cache_->ready = true;
  }
  return cache_->facets;
}

template <class F>
bool Cone<F>::facets_ready() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->ready;
}

template <class F>
std::vector<Vec<F>> double_description(const std::vector<Vec<F>>& constraints, std::size_t dim) {
  using Bits = boost::dynamic_bitset<>;
  const std::vector<Vec<F>> rows = canonical_nonzero(constraints, dim);
  const std::size_t k = rows.size();

  // Initial simplicial cone from d independent rows.
  std::vector<std::size_t> basis_rows;
  std::vector<Vec<F>> chosen;
  for (std::size_t i = 0; i < k && basis_rows.size() < dim; ++i) {
    chosen.push_back(rows[i]);
    if (rank_of<F>(chosen) == chosen.size()) {
      basis_rows.push_back(i);
    } else {
      chosen.pop_back();
    }
  }
  if (basis_rows.size() < dim) throw Error(ErrorCode::NotGenerating, "constraint rows do not span the space");

  const auto inv = inverse(Matrix<F>::from_rows(chosen, dim));
  if (!inv) throw Error(ErrorCode::NumericallyDegenerate, "initial basis not invertible");

  struct Ray {
    Vec<F> v;
    Bits zeros;
  };
  std::vector<Ray> rays;
  for (std::size_t c = 0; c < dim; ++c) {
    Ray r{canonical_ray(inv->col(c)), Bits(k)};
    for (std::size_t j = 0; j < dim; ++j) {
      if (j != c) r.zeros.set(basis_rows[j]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> processed(k, false);
  for (auto i : basis_rows) processed[i] = true;

  for (std::size_t h = 0; h < k; ++h) {
    if (processed[h]) continue;
    std::vector<int> signs(rays.size());
    std::vector<F> values(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      values[r] = dot(rows[h], rays[r].v);
      signs[r] = classify(values[r]);
    }
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (signs[r] >= 0) {
        Ray kept = rays[r];
        if (signs[r] == 0) kept.zeros.set(h);
        next.push_back(std::move(kept));
      }
    }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (signs[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (signs[q] >= 0) continue;
        Bits common = rays[p].zeros & rays[q].zeros;
        if (dim >= 2 && common.count() + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec<F> combo = sub(scale(rays[q].v, values[p]), scale(rays[p].v, values[q]));
        Ray born{canonical_ray(combo), common};
        born.zeros.set(h);
        next.push_back(std::move(born));
      }
    }
    rays = std::move(next);
    processed[h] = true;
  }

  std::vector<Vec<F>> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  sort_unique(out);
  return out;
}

template <class F>
Cone<F> dual_cone(const Cone<F>& c) {
  if (rank_of<F>(c.generators()) < c.ambient_dim()) {
    throw Error(ErrorCode::NotGenerating, "generators do not span the ambient space");
  }
  const auto& rays = c.facets();
  if (rank_of<F>(rays) < c.ambient_dim()) {
    throw Error(ErrorCode::NotPointed, "cone contains a line; its dual is not full-dimensional");
  }
  return Cone<F>(rays, c.ambient_dim());
}

template <class F>
bool certify_extreme(const Vec<F>& ray, const std::vector<Vec<F>>& facets, std::size_t dim) {
  std::vector<Vec<F>> tight;
  for (const auto& f : facets) {
    if (classify(dot(f, ray)) == 0) tight.push_back(f);
  }
  return dim >= 1 && rank_of<F>(tight) == dim - 1;
}

template <class F>
std::vector<Vec<F>> extreme_rays(const Cone<F>& c) {
  const auto& gens = c.generators();
  const std::size_t dim = c.ambient_dim();
  std::vector<Vec<F>> out;
  const bool dual_route =
      c.facets_ready() || (gens.size() <= kDualRouteGeneratorCap && rank_of<F>(gens) == dim);
  if (dual_route) {
    const auto& facets = c.facets();
    for (const auto& g : gens) {
      if (certify_extreme(g, facets, dim)) out.push_back(g);
    }
    return out;
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<Vec<F>> others;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (j != i) others.push_back(gens[j]);
    }
    if (others.empty() || !member(Cone<F>(others, dim), gens[i])) out.push_back(gens[i]);
  }
  return out;
}

template <class F>
bool member(const Cone<F>& c, const Vec<F>& v) {
  if (v.size() != c.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "member: vector length");
  if (is_zero_vec(v)) return true;
  if (c.generators().empty()) return false;
  if (c.facets_ready()) {
    for (const auto& f : c.facets()) {
      if (classify(dot(f, v)) < 0) return false;
    }
    return true;
  }
  return solve_feasibility(generator_columns(c.generators(), c.ambient_dim()), v).feasible;
}

template <class F>
bool cone_leq(const Vec<F>& v, const Vec<F>& w, const Cone<F>& c) {
  if (v.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "cone_leq: vector lengths");
  return member(c, sub(w, v));
}

template <class F>
std::optional<Vec<F>> separating_witness(const Cone<F>& c, const Vec<F>& v) {
  if (v.size() != c.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "witness: vector length");
  if (is_zero_vec(v)) return std::nullopt;
  if (c.generators().empty()) return scale(v, F(-1));
  auto result = solve_feasibility(generator_columns(c.generators(), c.ambient_dim()), v);
  if (result.feasible) return std::nullopt;
  return result.farkas;
}

#define GPTLAB_INSTANTIATE_CONE(F)                                                                   \
  template class Cone<F>;                                                                            \
  template std::vector<Vec<F>> double_description<F>(const std::vector<Vec<F>>&, std::size_t);      \
  template Cone<F> dual_cone<F>(const Cone<F>&);                                                     \
  template std::vector<Vec<F>> extreme_rays<F>(const Cone<F>&);                                      \
  template bool certify_extreme<F>(const Vec<F>&, const std::vector<Vec<F>>&, std::size_t);         \
  template bool member<F>(const Cone<F>&, const Vec<F>&);                                            \
  template bool cone_leq<F>(const Vec<F>&, const Vec<F>&, const Cone<F>&);                           \
  template std::optional<Vec<F>> separating_witness<F>(const Cone<F>&, const Vec<F>&);

GPTLAB_INSTANTIATE_CONE(Rational)
GPTLAB_INSTANTIATE_CONE(double)

}  // namespace gptlab
