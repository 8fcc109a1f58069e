// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "gptlab/polygon.hpp"
#include "helpers.hpp"

using namespace gptlab;
using testing_util::to_d;
using Q = Rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Transformations gathered by criteria 3-5 and re-examined by criterion 7.
struct Shared {
  CompositeSystem<Q> square2;
  std::vector<Transformation<Q>> square2_maps;
  CompositeSystem<double> pentagon2;
  std::vector<Transformation<double>> pentagon2_maps;
  CompositeSystem<Q> gtrit2;
  std::optional<Transformation<Q>> cnot;
};

std::set<std::set<std::size_t>> as_sets(const std::vector<std::vector<std::size_t>>& parts) {
  std::set<std::set<std::size_t>> out;
  for (const auto& p : parts) out.emplace(p.begin(), p.end());
  return out;
}

template <class F>
std::set<std::set<std::size_t>> component_sets(const Decomposition<F>& d) {
  std::vector<std::vector<std::size_t>> parts;
  for (const auto& c : d.components) parts.push_back(c.ray_indices);
  return as_sets(parts);
}

template <class F>
std::size_t trivial_group_order(const LocalSystem<F>& s) {
  const std::size_t g = oracle::symmetry_order(to_d(s.ray_extremes), to_d(s.unit));
  return g * g * 2;
}

Outcome dichotomy_catalog(Shared&) {
  Outcome o;
  for (int n : {3, 4, 5}) o.require(!is_dichotomic(build_classical<Q>(n)), fmt::format("classical {} dichotomic", n));
  for (int d : {2, 3, 4}) o.require(is_dichotomic(build_cube<Q>(d)), fmt::format("cube {} not dichotomic", d));
  for (int d : {2, 3}) o.require(is_dichotomic(build_octoplex<Q>(d)), fmt::format("octoplex {} not dichotomic", d));
  for (int n : {5, 7}) o.require(!is_dichotomic(build_polygon(n)), fmt::format("polygon {} dichotomic", n));
  for (int n : {4, 6, 8}) o.require(is_dichotomic(build_polygon(n)), fmt::format("polygon {} not dichotomic", n));
  if (o.pass) o.detail = "15 catalog entries match";
  return o;
}

Outcome reducibility_catalog(Shared&) {
  Outcome o;
  auto check = [&](const auto& s, std::size_t expected) {
    const auto d = reduce(s);
    o.require(d.components.size() == expected,
              fmt::format("{}: {} components, expected {}", s.name, d.components.size(), expected));
    o.require(component_sets(d) == as_sets(brute_force_finest_partition(s.ray_extremes)),
              s.name + ": differs from brute-force partition");
    return d;
  };
  check(build_classical<Q>(3), 3);
  const auto g = check(build_squashed_gtrit<Q>(), 2);
  o.require(!g.components.empty() && g.components[0].ray_indices == std::vector<std::size_t>{0},
            "g-trit first component is not {X}");
  check(build_cube<Q>(2), 1);
  check(build_polygon(5), 1);
  check(build_cube<Q>(3), 1);
  if (o.pass) o.detail = "trit 3, g-trit 2 with {X}, square/pentagon/cube(3) 1; brute force agrees";
  return o;
}

Outcome square_pair_triviality(Shared& sh) {
  Outcome o;
  const auto sq = build_cube<Q>(2);
  sh.square2 = compose<Q>({sq, sq});
  sh.square2_maps = enumerate_reversibles(sh.square2);
  const std::size_t expected = trivial_group_order(sq);
  std::size_t certified = 0;
  for (const auto& t : sh.square2_maps) certified += triviality_certificate(sh.square2, t).has_value();
  o.require(expected == 128, fmt::format("oracle trivial-group order {}", expected));
  o.require(sh.square2_maps.size() == expected, fmt::format("{} reversibles", sh.square2_maps.size()));
  o.require(certified == sh.square2_maps.size(), fmt::format("{} certified", certified));
  if (o.pass) o.detail = fmt::format("{} reversibles, all certified, oracle order 8*8*2 = {}", certified, expected);
  return o;
}

Outcome pentagon_pair_triviality(Shared& sh) {
  Outcome o;
  const auto p = build_polygon(5);
  sh.pentagon2 = compose<double>({p, p});
  sh.pentagon2_maps = enumerate_reversibles(sh.pentagon2);
  const std::size_t expected = trivial_group_order(p);
  const auto f = polygon_frame(5);
  const std::vector<PolygonFrame> frames{f, f};
  std::size_t certified = 0;
  double worst = 0.0;
  for (const auto& t : sh.pentagon2_maps) {
    certified += triviality_certificate(sh.pentagon2, t).has_value();
    worst = std::max(worst, orthogonality_check(sh.pentagon2, frames, t).deviation);
  }
  const double id1 = frame_identity_deviation(f);
  const double id2 = frame_identity_deviation(frames);
  o.require(expected == 200, fmt::format("oracle trivial-group order {}", expected));
  o.require(sh.pentagon2_maps.size() == expected, fmt::format("{} reversibles", sh.pentagon2_maps.size()));
  o.require(certified == sh.pentagon2_maps.size(), fmt::format("{} certified", certified));
  o.require(worst < 1e-8, fmt::format("orthogonality deviation {:.3g}", worst));
  o.require(id1 < 1e-12, fmt::format("single frame identity deviation {:.3g}", id1));
  o.require(id2 < 1e-10, fmt::format("composite frame identity deviation {:.3g}", id2));
  if (o.pass) {
    o.detail = fmt::format("{} reversibles certified, max |T'T-I| {:.2g}, frame deviations {:.2g} / {:.2g}", certified,
                           worst, id1, id2);
  }
  return o;
}

Outcome gtrit_cnot(Shared& sh) {
  Outcome o;
  const auto g = build_squashed_gtrit<Q>();
  sh.gtrit2 = compose<Q>({g, g});
  const auto& c = sh.gtrit2;
  sh.cnot = build_conditional_cnot(c, 1, 2, default_conditional_symmetry(c.locals[1]));
  const auto& t = *sh.cnot;
  // Local order X, Y0, Y1, Z0, Z1; the target flips only when the control is X.
  const std::size_t flip[5] = {0, 2, 1, 4, 3};
  bool table_ok = t.ray_image.size() == 25;
  for (std::size_t a = 0; table_ok && a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      table_ok = table_ok && t.ray_image[c.tuple_index({a, b})] == c.tuple_index({a, a == 0 ? flip[b] : b});
    }
  }
  o.require(table_ok, "ray map differs from the expected table");
  o.require(is_allowed_reversible(c, t), "not allowed");
  o.require(!is_adjacency_preserving(c, t), "adjacency preserving");
  o.require(!subunit_criterion(c, t), "sub-unit criterion holds");
  const auto audit = entanglement_audit(c, t);
  o.require(audit.permutes_product_states && audit.permutation.size() == 25, "does not permute the 25 product states");
  const bool correlated = audit.correlated_output.has_value() && is_separable(c, *audit.correlated_output) &&
                          !is_product_vector(c, *audit.correlated_output);
  o.require(correlated, "no classically correlated image found");
  if (o.pass) {
    o.detail = fmt::format("table matches, allowed, not adjacency preserving, criterion false, 25 product states "
                           "permuted, correlated separable image (mixed slot {})",
                           audit.mixed_slot);
  }
  return o;
}

template <class F>
std::size_t refiner_violations(const CompositeSystem<F>& c) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i <= c.subsystem_count(); ++i) {
    for (const auto& e : sub_unit_effects(c, i)) {
      const auto refs = refiners_of_subunit(c, e);
      bad += refs.size() != c.locals[i - 1].ray_count();
      for (std::size_t a = 0; a < refs.size(); ++a) {
        for (std::size_t b = a + 1; b < refs.size(); ++b) bad += adjacency(refs[a], refs[b]) != std::optional(i);
      }
    }
  }
  return bad;
}

Outcome refiner_adjacency(Shared&) {
  Outcome o;
  const auto sq = build_cube<Q>(2);
  const auto p = build_polygon(5);
  const auto g = build_squashed_gtrit<Q>();
  const std::size_t v = refiner_violations(compose<Q>({sq, sq})) + refiner_violations(compose<double>({p, p})) +
                        refiner_violations(compose<Q>({g, sq})) + refiner_violations(compose<Q>({sq, sq, sq}));
  o.require(v == 0, fmt::format("{} violations", v));
  if (o.pass) o.detail = "0 violations over 4 composites";
  return o;
}

template <class F>
std::size_t criterion_discrepancies(const CompositeSystem<F>& c, const std::vector<Transformation<F>>& maps) {
  std::size_t bad = 0;
  for (const auto& t : maps) bad += subunit_criterion(c, t) != triviality_certificate(c, t).has_value();
  return bad;
}

Outcome criterion_equivalence(Shared& sh) {
  Outcome o;
  o.require(!sh.square2_maps.empty() && !sh.pentagon2_maps.empty() && sh.cnot.has_value(),
            "criteria 3-5 produced no transformations");
  if (!o.pass) return o;
  const std::size_t bad = criterion_discrepancies(sh.square2, sh.square2_maps) +
                          criterion_discrepancies(sh.pentagon2, sh.pentagon2_maps) +
                          criterion_discrepancies(sh.gtrit2, std::vector{*sh.cnot});
  const std::size_t total = sh.square2_maps.size() + sh.pentagon2_maps.size() + 1;
  o.require(bad == 0, fmt::format("{} discrepancies", bad));
  if (o.pass) o.detail = fmt::format("0 discrepancies over {} transformations", total);
  return o;
}

Outcome product_state_experiment(Shared& sh) {
  Outcome o;
  std::size_t maps = 0, composites = 0;
  auto run = [&](const std::string& name, const auto& c, const auto& enumerated) {
    for (const auto& t : enumerated) {
      o.require(entanglement_audit(c, t).permutes_product_states, name + ": a reversible breaks product states");
      ++maps;
    }
    ++composites;
  };
  run("square x square", sh.square2, sh.square2_maps);
  run("pentagon x pentagon", sh.pentagon2, sh.pentagon2_maps);
  const auto bit = build_classical<Q>(2);
  const auto bits = compose<Q>({bit, bit});
  run("bit x bit", bits, enumerate_reversibles(bits));
  const auto mixed = compose<Q>({build_squashed_gtrit<Q>(), build_cube<Q>(2)});
  run("g-trit x square", mixed, enumerate_reversibles(mixed));
  const auto p4 = build_polygon(4);
  const auto p4p4 = compose<double>({p4, p4});
  run("square-polygon pair", p4p4, enumerate_reversibles(p4p4));
  if (o.pass) {
    o.detail = fmt::format("all {} reversibles on {} composites permute pure product states (evidence, not proof)",
                           maps, composites);
  }
  return o;
}

Outcome geometry_oracles(Shared&) {
  Outcome o;
  auto involution = [&](const auto& s) {
    using F = typename std::decay_t<decltype(s.unit)>::value_type;
    const Cone<F> c(extreme_rays(s.effect_cone), s.dim);
    o.require(dual_cone(dual_cone(c)) == c, s.name + ": dual of dual differs");
  };
  for (int n : {2, 3, 4}) involution(build_classical<Q>(n));
  for (int d : {2, 3, 4}) involution(build_cube<Q>(d));
  for (int d : {2, 3}) involution(build_octoplex<Q>(d));
  involution(build_squashed_gtrit<Q>());
  for (int n : {3, 4, 5, 6, 7, 8}) involution(build_polygon(n));

  const auto sq = build_cube<Q>(2);
  const auto c = compose<Q>({sq, sq});
  const auto verts = state_polytope_vertices(c);
  const auto oracle_verts = oracle::polytope_vertices(to_d(c.ray_extremes), to_d(c.unit));
  o.require(verts.size() == 24 && oracle_verts.size() == 24,
            fmt::format("{} vertices (oracle {})", verts.size(), oracle_verts.size()));
  std::size_t entangled = 0;
  for (const auto& v : verts) {
    if (is_separable(c, v)) continue;
    ++entangled;
    const auto table = behavior_table(c, v);
    o.require(chsh_value(table) == Q(4) && oracle::square_chsh(to_d(v)) > 4.0 - 1e-9, "nonlocal vertex below CHSH 4");
  }
  o.require(entangled == 8, fmt::format("{} entangled vertices", entangled));
  if (o.pass) o.detail = "dual involution on 16 cones; 24 vertices, 8 entangled, each with CHSH 4";
  return o;
}

Outcome triangle_breakdown(Shared&) {
  Outcome o;
  const auto cl = inner_product_classes(3);
  o.require(cl.c_max == 0.0 && cl.c_min == 0.0, fmt::format("C_max {} C_min {}", cl.c_max, cl.c_min));
  const auto t = build_polygon(3);
  const auto c = compose<double>({t, t});
  const auto r = odd_polygon_triviality_check(c, Transformation<double>{Matrix<double>::identity(9), {}});
  o.require(r.failed_step == std::optional<std::string>("extremal-inner-product-uniqueness"),
            "uniqueness step did not fail");
  if (o.pass) o.detail = "C_max = C_min = 0; argument stops at extremal-inner-product-uniqueness";
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome(Shared&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dichotomy catalog", 1.0, dichotomy_catalog},
      {2, "reducibility catalog", 1.0, reducibility_catalog},
      {3, "square x square reversibles are trivial", 60.0, square_pair_triviality},
      {4, "pentagon x pentagon reversibles are trivial and orthogonal", 300.0, pentagon_pair_triviality},
      {5, "conditional CNOT on g-trits", 10.0, gtrit_cnot},
      {6, "refiners of sub-unit effects are adjacent", 0.0, refiner_adjacency},
      {7, "sub-unit criterion matches certificates", 0.0, criterion_equivalence},
      {8, "reversibles permute pure product states", 0.0, product_state_experiment},
      {9, "geometry oracles", 30.0, geometry_oracles},
      {10, "triangle breakdown", 0.0, triangle_breakdown},
  };
  Shared shared;
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run(shared);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && secs >= c.time_limit) o.require(false, fmt::format("exceeded {:g} s", c.time_limit));
    failures += !o.pass;
    fmt::print("{} criterion {:>2}: {} [{:.2f} s] {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
