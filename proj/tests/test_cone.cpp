#include "doctest.h"

#include <random>

#include "gptlab/system.hpp"
#include "helpers.hpp"

using namespace gptlab;
using testing_util::qv;
using Q = Rational;

namespace {

Vec<Q> e(std::size_t n, std::size_t i) {
  Vec<Q> v(n, Q(0));
  v[i] = 1;
  return v;
}

Cone<Q> square_effects() { return build_cube<Q>(2).effect_cone; }

}  // namespace

TEST_CASE("nonnegative orthant is self-dual") {
  const Cone<Q> orthant({e(3, 0), e(3, 1), e(3, 2)}, 3);
  CHECK(dual_cone(orthant) == orthant);
}

TEST_CASE("dual of the square effect cone has the four rays (1, +-1, +-1)") {
  const auto d = dual_cone(square_effects());
  const auto rays = extreme_rays(d);
  REQUIRE(rays.size() == 4);
  std::vector<Vec<Q>> expected;
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) expected.push_back(canonical_ray(Vec<Q>{Q(1), Q(a), Q(b)}));
  }
  sort_unique(expected);
  CHECK(rays == expected);
}

TEST_CASE("squashed g-trit state cone has five extreme rays") {
  const auto s = build_squashed_gtrit<Q>();
  CHECK(extreme_rays(dual_cone(s.effect_cone)).size() == 5);
}

TEST_CASE("extreme_rays removes duplicates and interior generators") {
  const Vec<Q> a{Q(1), Q(0), Q(1)}, b{Q(0), Q(1), Q(1)};
  const Cone<Q> c({a, scale(a, Q(2)), b}, 3);
  CHECK(extreme_rays(c).size() == 2);

  auto gens = build_cube<Q>(2).ray_extremes;
  gens.push_back(Vec<Q>{Q(1), Q(0), Q(0)});
  CHECK(extreme_rays(Cone<Q>(gens, 3)).size() == 4);
}

TEST_CASE("pentagon effect cone: five rays, each vanishing on two pure states") {
  const auto p = build_polygon(5);
  const auto rays = extreme_rays(p.effect_cone);
  REQUIRE(rays.size() == 5);
  for (const auto& r : rays) {
    int zeros = 0;
    for (const auto& s : p.pure_states) zeros += std::fabs(dot(r, s)) < 1e-9;
    CHECK(zeros == 2);
  }
}

TEST_CASE("membership in the square effect cone") {
  const auto c = square_effects();
  CHECK(member(c, Vec<Q>{Q(0), Q(0), Q(0)}));
  CHECK(member(c, Vec<Q>{Q(1), Q(0), Q(0)}));
  CHECK_FALSE(member(c, Vec<Q>{Q(0), Q(1), Q(0)}));
  const auto w = separating_witness(c, Vec<Q>{Q(0), Q(1), Q(0)});
  REQUIRE(w.has_value());
  CHECK(sign(dot(*w, Vec<Q>{Q(0), Q(1), Q(0)})) < 0);
  for (const auto& g : c.generators()) CHECK(sign(dot(*w, g)) >= 0);
}

TEST_CASE("cone order on square effects") {
  const auto c = square_effects();
  const auto h = qv({"1/2", "1/2", "0"});
  CHECK(cone_leq(h, h, c));
  CHECK(cone_leq(h, Vec<Q>{Q(1), Q(0), Q(0)}, c));
  CHECK_FALSE(cone_leq(h, qv({"1/2", "0", "1/2"}), c));
}

TEST_CASE("nullspace examples") {
  CHECK(nullspace(Matrix<Q>::identity(3)).empty());
  const Matrix<Q> row = Matrix<Q>::from_rows(std::vector<Vec<Q>>{{Q(1), Q(1), Q(1)}}, 3);
  const auto ns = nullspace(row);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(is_zero(dot(v, Vec<Q>{Q(1), Q(1), Q(1)})));

  const auto g = build_squashed_gtrit<Q>();
  auto cols = g.ray_extremes;
  cols.push_back(scale(g.unit, Q(-1)));
  const auto kernel = nullspace(Matrix<Q>::from_columns(cols, 4));
  REQUIRE(kernel.size() == 2);
  // Both relations X+Y0+Y1 = u and X+Z0+Z1 = u lie in the kernel's span.
  const Vec<Q> r1{Q(1), Q(1), Q(1), Q(0), Q(0), Q(1)};
  const Vec<Q> r2{Q(1), Q(0), Q(0), Q(1), Q(1), Q(1)};
  for (const auto& r : {r1, r2}) {
    std::vector<Vec<Q>> span = kernel;
    span.push_back(r);
    CHECK(rank_of<Q>(span) == 2);
  }
}

TEST_CASE("feasibility LP returns verified solutions and Farkas witnesses") {
  const Matrix<Q> a = Matrix<Q>::from_rows(std::vector<Vec<Q>>{{Q(1), Q(1)}, {Q(1), Q(-1)}}, 2);
  const auto ok = solve_feasibility(a, Vec<Q>{Q(2), Q(0)});
  REQUIRE(ok.feasible);
  CHECK(ok.solution == Vec<Q>{Q(1), Q(1)});
  const auto bad = solve_feasibility(a, Vec<Q>{Q(-1), Q(0)});
  REQUIRE_FALSE(bad.feasible);
  const auto aty = a.transpose().apply(bad.farkas);
  for (const auto& x : aty) CHECK(sign(x) >= 0);
  CHECK(sign(dot(bad.farkas, Vec<Q>{Q(-1), Q(0)})) < 0);
}

TEST_CASE("dual_cone rejects non-pointed and non-generating inputs") {
  const Cone<Q> line({e(2, 0), scale(e(2, 0), Q(-1)), e(2, 1)}, 2);
  CHECK_THROWS_AS(dual_cone(line), Error);
  const Cone<Q> flat({e(3, 0), e(3, 1)}, 3);
  CHECK_THROWS_AS(dual_cone(flat), Error);
}

// Invariants.

TEST_CASE("duality involution on catalog cones") {
  for (const auto& s : {build_classical<Q>(3), build_cube<Q>(2), build_cube<Q>(3), build_octoplex<Q>(3),
                        build_squashed_gtrit<Q>()}) {
    CAPTURE(s.name);
    const Cone<Q> c(extreme_rays(s.effect_cone), s.dim);
    CHECK(dual_cone(dual_cone(c)) == c);
  }
  for (int n : {4, 5, 6, 7}) {
    const auto p = build_polygon(n);
    const Cone<double> c(extreme_rays(p.effect_cone), 3);
    CHECK(dual_cone(dual_cone(c)) == c);
  }
}

TEST_CASE("cone order is transitive and antisymmetric on sampled effects") {
  const auto c = build_cube<Q>(3).effect_cone;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-3, 3);
  std::vector<Vec<Q>> pts;
  for (int i = 0; i < 18; ++i) pts.push_back({Q(num(rng) + 6), Q(num(rng)), Q(num(rng)), Q(num(rng))});
  for (const auto& v : pts) {
    for (const auto& w : pts) {
      const bool vw = cone_leq(v, w, c), wv = cone_leq(w, v, c);
      if (vw && wv) CHECK(v == w);
      if (!vw) continue;
      for (const auto& x : pts) {
        if (cone_leq(w, x, c)) CHECK(cone_leq(v, x, c));
      }
    }
  }
}

TEST_CASE("each extreme ray is a member and is cut off once removed") {
  for (const auto& s : {build_cube<Q>(2), build_octoplex<Q>(3), build_squashed_gtrit<Q>()}) {
    const auto rays = extreme_rays(s.effect_cone);
    for (std::size_t i = 0; i < rays.size(); ++i) {
      CHECK(member(s.effect_cone, rays[i]));
      auto rest = rays;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      CHECK(separating_witness(Cone<Q>(rest, s.dim), rays[i]).has_value());
    }
  }
}

TEST_CASE("float and exact modes agree on shared systems") {
  auto compare = [](const LocalSystem<Q>& q, const LocalSystem<double>& d) {
    CHECK(q.ray_count() == d.ray_count());
    CHECK(q.pure_states.size() == d.pure_states.size());
    CHECK(is_dichotomic(q) == is_dichotomic(d));
    CHECK(reduce(q).components.size() == reduce(d).components.size());
    CHECK(validate_system(q).ok() == validate_system(d).ok());
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-4, 4);
    for (int i = 0; i < 20; ++i) {
      Vec<Q> vq{Q(num(rng) + 4)};
      for (std::size_t k = 1; k < q.dim; ++k) vq.push_back(Q(num(rng), 2));
      Vec<double> vd;
      for (const auto& x : vq) vd.push_back(x.get_d());
      CHECK(member(q.effect_cone, vq) == member(d.effect_cone, vd));
      CHECK(member(q.state_cone, vq) == member(d.state_cone, vd));
    }
  };
  compare(build_cube<Q>(2), build_cube<double>(2));
  compare(build_cube<Q>(3), build_cube<double>(3));
  compare(build_classical<Q>(3), build_classical<double>(3));
  compare(build_squashed_gtrit<Q>(), build_squashed_gtrit<double>());
}
