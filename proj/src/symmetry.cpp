#include "gptlab/symmetry.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace gptlab {

namespace {

template <class F>
struct Plan {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<std::size_t> basis;
  // Sparse expansion of every source vector in the chosen basis.
  std::vector<std::vector<std::pair<std::size_t, F>>> expansion;
  std::vector<std::vector<std::size_t>> forced_at;
  std::vector<std::pair<std::size_t, F>> unit_expansion;
  std::size_t unit_depth = 0;
  Matrix<F> basis_inverse;
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<std::vector<std::size_t>> src_colour;
  std::vector<std::vector<std::size_t>> dst_colour;
};

template <class F>
struct Shared {
  const Plan<F>& plan;
  const Configuration<F>& dst;
  const VectorIndex<F>& dst_index;
  const SearchConfig& cfg;
  bool first_only;
  std::atomic<std::size_t> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> over_budget{false};
};

template <class F>
class Worker {
 public:
  explicit Worker(Shared<F>& shared)
      : s_(shared),
        used_(shared.plan.count, false),
        image_(shared.plan.count, 0) {}

  void run_branch(std::size_t first_candidate) { try_assign(0, first_candidate); }

  std::vector<LinearIsomorphism<F>> take() { return std::move(found_); }

 private:
  Vec<F> combine(const std::vector<std::pair<std::size_t, F>>& terms) const {
    Vec<F> v(s_.plan.dim, F(0));
    for (const auto& [k, coef] : terms) {
      const Vec<F>& target = s_.dst.vectors[image_[s_.plan.basis[k]]];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += coef * target[i];
    }
    return v;
  }

  void descend(std::size_t depth) {
    if (s_.stop.load(std::memory_order_relaxed)) return;
    if (depth == s_.plan.dim) {
      emit();
      return;
    }
    for (std::size_t t : s_.plan.candidates[depth]) {
      if (s_.stop.load(std::memory_order_relaxed)) return;
      try_assign(depth, t);
    }
  }

  void try_assign(std::size_t depth, std::size_t t) {
    if (used_[t]) return;
    const std::size_t n = s_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > s_.cfg.node_cap) {
      s_.over_budget = true;
      s_.stop = true;
      return;
    }
    const auto& plan = s_.plan;
    std::vector<std::size_t> marked;
    used_[t] = true;
    image_[plan.basis[depth]] = t;
    marked.push_back(t);
    bool ok = true;
    for (std::size_t j : plan.forced_at[depth]) {
      const auto idx = s_.dst_index.find(combine(plan.expansion[j]));
      if (!idx || used_[*idx] || plan.src_colour[j] != plan.dst_colour[*idx]) {
        ok = false;
        break;
      }
      used_[*idx] = true;
      image_[j] = *idx;
      marked.push_back(*idx);
    }
    if (ok && plan.unit_depth == depth) ok = vec_near(combine(plan.unit_expansion), s_.dst.unit);
    if (ok) descend(depth + 1);
    for (auto idx : marked) used_[idx] = false;
  }

  void emit() {
    const auto& plan = s_.plan;
    if (!s_.cfg.keep_matrices) {
      found_.push_back({Matrix<F>(), image_});
      if (s_.first_only) s_.stop = true;
      return;
    }
    Matrix<F> images(plan.dim, plan.dim);
    for (std::size_t k = 0; k < plan.dim; ++k) {
      const Vec<F>& v = s_.dst.vectors[image_[plan.basis[k]]];
      for (std::size_t r = 0; r < plan.dim; ++r) images(r, k) = v[r];
    }
    found_.push_back({images * plan.basis_inverse, image_});
    if (s_.first_only) s_.stop = true;
  }

  Shared<F>& s_;
  std::vector<bool> used_;
  std::vector<std::size_t> image_;
  std::vector<LinearIsomorphism<F>> found_;
};

template <class F>
Plan<F> make_plan(const Configuration<F>& src, const Configuration<F>& dst, const SearchConfig& cfg,
                  const std::vector<std::size_t>& preferred_order) {
  Plan<F> plan;
  plan.count = src.vectors.size();
  plan.dim = src.unit.size();
  std::vector<std::size_t> order = preferred_order;
  if (order.empty()) {
    order.resize(plan.count);
    for (std::size_t i = 0; i < plan.count; ++i) order[i] = i;
  }
  std::vector<Vec<F>> chosen;
  for (std::size_t j : order) {
    if (plan.basis.size() == plan.dim) break;
    chosen.push_back(src.vectors[j]);
    if (rank_of<F>(chosen) == chosen.size()) {
      plan.basis.push_back(j);
    } else {
      chosen.pop_back();
    }
  }
  if (plan.basis.size() < plan.dim) {
    throw Error(ErrorCode::NotGenerating, "configuration does not span the space");
  }
  const Matrix<F> basis_matrix = Matrix<F>::from_columns(chosen, plan.dim);
  auto inv = inverse(basis_matrix);
  if (!inv) throw Error(ErrorCode::NumericallyDegenerate, "basis matrix not invertible");
  plan.basis_inverse = *inv;

  std::vector<std::size_t> position(plan.count, plan.dim);
  for (std::size_t k = 0; k < plan.dim; ++k) position[plan.basis[k]] = k;

  auto expand = [&](const Vec<F>& v, std::size_t& depth) {
    const Vec<F> coeffs = plan.basis_inverse.apply(v);
    std::vector<std::pair<std::size_t, F>> terms;
    depth = 0;
    for (std::size_t k = 0; k < plan.dim; ++k) {
      if (is_zero(coeffs[k])) continue;
      terms.emplace_back(k, coeffs[k]);
      depth = k;
    }
    return terms;
  };

  plan.expansion.resize(plan.count);
  plan.forced_at.assign(plan.dim, {});
  for (std::size_t j = 0; j < plan.count; ++j) {
    if (position[j] < plan.dim) continue;
    std::size_t depth = 0;
    plan.expansion[j] = expand(src.vectors[j], depth);
    plan.forced_at[depth].push_back(j);
  }
  plan.unit_expansion = expand(src.unit, plan.unit_depth);

  if (cfg.symmetry_pruning) {
    plan.src_colour = configuration_colours(src);
    plan.dst_colour = configuration_colours(dst);
  } else {
    plan.src_colour.assign(plan.count, {});
    plan.dst_colour.assign(plan.count, {});
  }
  plan.candidates.resize(plan.dim);
  for (std::size_t k = 0; k < plan.dim; ++k) {
    for (std::size_t t = 0; t < plan.count; ++t) {
      if (plan.src_colour[plan.basis[k]] == plan.dst_colour[t]) plan.candidates[k].push_back(t);
    }
  }
  return plan;
}

}  // namespace

template <class F>
std::vector<std::vector<std::size_t>> configuration_colours(const Configuration<F>& config) {
  const auto& vs = config.vectors;
  const std::size_t m = vs.size();
  std::vector<std::size_t> partners(m, 0);
  std::vector<std::size_t> circuits(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (vec_near(add(vs[i], vs[j]), config.unit)) {
        ++partners[i];
        ++partners[j];
      }
    }
  }
  // Three-element circuits: triples of pairwise independent vectors spanning a plane.
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        const std::vector<Vec<F>> triple{vs[a], vs[b], vs[c]};
        if (rank_of<F>(triple) == 2) {
          ++circuits[a];
          ++circuits[b];
          ++circuits[c];
        }
      }
    }
  }
  // Connected components of the vector matroid: vectors sharing a circuit.
  std::vector<std::size_t> root(m);
  for (std::size_t i = 0; i < m; ++i) root[i] = i;
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  if (m > 0) {
    for (const auto& k : nullspace(Matrix<F>::from_columns(vs, config.unit.size()))) {
      std::optional<std::size_t> first;
      for (std::size_t i = 0; i < m; ++i) {
        if (is_zero(k[i])) continue;
        if (first) {
          root[find(i)] = find(*first);
        } else {
          first = i;
        }
      }
    }
  }
  std::vector<std::size_t> comp_size(m, 0), comp_rank(m, 0);
  for (std::size_t i = 0; i < m; ++i) ++comp_size[find(i)];
  for (std::size_t i = 0; i < m; ++i) {
    if (find(i) != i) continue;
    std::vector<Vec<F>> members;
    for (std::size_t j = 0; j < m; ++j) {
      if (find(j) == i) members.push_back(vs[j]);
    }
    comp_rank[i] = rank_of<F>(members);
  }
  std::vector<std::vector<std::size_t>> colours(m);
  for (std::size_t i = 0; i < m; ++i) {
    colours[i] = {partners[i], circuits[i], comp_size[find(i)], comp_rank[find(i)]};
  }
  return colours;
}

template <class F>
std::vector<LinearIsomorphism<F>> find_linear_isomorphisms(const Configuration<F>& src, const Configuration<F>& dst,
                                                           const SearchConfig& cfg, bool first_only,
                                                           const std::vector<std::size_t>& preferred_order) {
  if (cfg.node_cap == 0) throw Error(ErrorCode::InvalidParameter, "node cap must be positive");
  if (src.unit.size() != dst.unit.size()) return {};
  if (src.vectors.size() != dst.vectors.size()) return {};
  if (src.vectors.empty()) return {};

  const Plan<F> plan = make_plan(src, dst, cfg, preferred_order);
  if (rank_of<F>(dst.vectors) < plan.dim) return {};
  {
    auto a = plan.src_colour;
    auto b = plan.dst_colour;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return {};
  }

  const VectorIndex<F> dst_index(dst.vectors);
  Shared<F> shared{plan, dst, dst_index, cfg, first_only};
  const auto& top = plan.candidates[0];
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(top.size())));

  std::vector<std::vector<LinearIsomorphism<F>>> per_worker(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      Worker<F> worker(shared);
      for (std::size_t i = w; i < top.size(); i += workers) {
        if (shared.stop.load()) break;
        worker.run_branch(top[i]);
      }
      per_worker[w] = worker.take();
    } catch (...) {
      errors[w] = std::current_exception();
      shared.stop = true;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<LinearIsomorphism<F>> out;
  for (auto& batch : per_worker) {
    for (auto& iso : batch) out.push_back(std::move(iso));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.image < b.image; });
  if (shared.over_budget) throw SearchBudgetExceeded(shared.nodes.load(), out.size());
  if (first_only && out.size() > 1) out.resize(1);
  return out;
}

#define GPTLAB_INSTANTIATE_SYMMETRY(F)                                                                   \
  template std::vector<LinearIsomorphism<F>> find_linear_isomorphisms<F>(                               \
      const Configuration<F>&, const Configuration<F>&, const SearchConfig&, bool,                      \
      const std::vector<std::size_t>&);                                                                  \
  template std::vector<std::vector<std::size_t>> configuration_colours<F>(const Configuration<F>&);

GPTLAB_INSTANTIATE_SYMMETRY(Rational)
GPTLAB_INSTANTIATE_SYMMETRY(double)

}  // namespace gptlab
