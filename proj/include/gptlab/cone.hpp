#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gptlab/linalg.hpp"
#include "gptlab/lp.hpp"

namespace gptlab {

/// Closed polyhedral cone given by generators. Generators are canonicalized
/// (positive rescaling), zero vectors dropped, duplicates removed and the set
/// sorted; redundant generators are kept until extreme_rays() is asked for.
/// Facet normals (the dual cone's extreme rays) are computed on first use and
/// shared between copies.
template <class F>
class Cone {
 public:
  Cone() = default;
  Cone(std::vector<Vec<F>> generators, std::size_t ambient_dim);

  std::size_t ambient_dim() const { return dim_; }
  const std::vector<Vec<F>>& generators() const { return generators_; }

  /// Inward facet normals: every generator has nonnegative inner product with each.
  const std::vector<Vec<F>>& facets() const;
  bool facets_ready() const;

  /// Same canonical generator set.
  friend bool operator==(const Cone& a, const Cone& b) {
    if (a.dim_ != b.dim_ || a.generators_.size() != b.generators_.size()) return false;
    for (std::size_t i = 0; i < a.generators_.size(); ++i) {
      if (!vec_near(a.generators_[i], b.generators_[i])) return false;
    }
    return true;
  }

 private:
  struct Cache {
    std::mutex mutex;
    bool ready = false;
    std::vector<Vec<F>> facets;
  };

  std::size_t dim_ = 0;
  std::vector<Vec<F>> generators_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Extreme rays of {x : <h, x> >= 0 for all h in constraints} by the double
/// description method. The constraint rows must span the space.
template <class F>
std::vector<Vec<F>> double_description(const std::vector<Vec<F>>& constraints, std::size_t dim);

/// {v : <v, g> >= 0 for all generators g}. Throws NotGenerating / NotPointed.
template <class F>
Cone<F> dual_cone(const Cone<F>& c);

/// Minimal canonical generator set.
template <class F>
std::vector<Vec<F>> extreme_rays(const Cone<F>& c);

/// True when `ray` lies on an extreme ray of the cone whose facet normals are
/// `facets`: the normals vanishing on it have rank dim - 1.
template <class F>
bool certify_extreme(const Vec<F>& ray, const std::vector<Vec<F>>& facets, std::size_t dim);

/// Nonnegative-combination test (exact LP, or eps-relaxed in float mode).
template <class F>
bool member(const Cone<F>& c, const Vec<F>& v);

/// v <= w in the order induced by the cone.
template <class F>
bool cone_leq(const Vec<F>& v, const Vec<F>& w, const Cone<F>& c);

/// Some y with <y, g> >= 0 on every generator and <y, v> < 0, or nullopt if v is a member.
template <class F>
std::optional<Vec<F>> separating_witness(const Cone<F>& c, const Vec<F>& v);

}  // namespace gptlab
