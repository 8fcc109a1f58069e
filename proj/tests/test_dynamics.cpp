#include "doctest.h"

#include <numeric>
#include <set>

#include "gptlab/dynamics.hpp"
#include "helpers.hpp"

using namespace gptlab;
using testing_util::to_d;
using Q = Rational;

namespace {

template <class F>
Matrix<F> swap_matrix(std::size_t d) {
  Matrix<F> s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(j * d + i, i * d + j) = F(1);
  }
  return s;
}

template <class F>
Transformation<F> make(const Matrix<F>& adjoint) {
  return Transformation<F>{adjoint, {}};
}

template <class F>
bool near_identity(const Matrix<F>& m) {
  return matrix_near(m, Matrix<F>::identity(m.rows()), 1e-9);
}

const CompositeSystem<Q>& square2() {
  static const auto c = compose<Q>({build_cube<Q>(2), build_cube<Q>(2)});
  return c;
}

const CompositeSystem<double>& pentagon2() {
  static const auto c = compose<double>({build_polygon(5), build_polygon(5)});
  return c;
}

const CompositeSystem<Q>& gtrit2() {
  static const auto c = compose<Q>({build_squashed_gtrit<Q>(), build_squashed_gtrit<Q>()});
  return c;
}

Transformation<Q> gtrit_cnot() {
  const auto& c = gtrit2();
  return build_conditional_cnot(c, 1, 2, default_conditional_symmetry(c.locals[1]));
}

}  // namespace

TEST_CASE("allowed reversible transformations") {
  const auto& c = square2();
  CHECK(is_allowed_reversible(c, make(Matrix<Q>::identity(9))));
  CHECK(is_allowed_reversible(c, make(swap_matrix<Q>(3))));
  Matrix<Q> bad = Matrix<Q>::identity(9);
  bad(4, 4) = Q(2);
  CHECK_FALSE(is_allowed_reversible(c, make(bad)));
}

TEST_CASE("adjacency preservation") {
  const auto& c = square2();
  const auto g = local_symmetry_group(c.locals[0]);
  for (const auto& m : g) CHECK(is_adjacency_preserving(c, make(kron(m, Matrix<Q>::identity(3)))));
  CHECK(is_adjacency_preserving(c, make(swap_matrix<Q>(3))));
  CHECK_FALSE(is_adjacency_preserving(gtrit2(), gtrit_cnot()));
  Matrix<Q> bad = Matrix<Q>::identity(9);
  bad(4, 4) = Q(2);
  CHECK_THROWS_AS(is_adjacency_preserving(c, make(bad)), Error);
}

TEST_CASE("triviality certificates") {
  const auto& c = square2();
  const auto id = triviality_certificate(c, make(Matrix<Q>::identity(9)));
  REQUIRE(id.has_value());
  CHECK(id->sigma == std::vector<std::size_t>{1, 2});
  for (const auto& m : id->maps) CHECK(m == Matrix<Q>::identity(3));

  const auto sw = triviality_certificate(c, make(swap_matrix<Q>(3)));
  REQUIRE(sw.has_value());
  CHECK(sw->sigma == std::vector<std::size_t>{2, 1});
  for (const auto& m : sw->maps) CHECK(m == Matrix<Q>::identity(3));

  const auto& p = pentagon2();
  const auto group = local_symmetry_group(p.locals[0]);
  const Matrix<double>* rotation = nullptr;
  for (const auto& m : group) {
    if (!near_identity(m) && !near_identity(m * m)) rotation = &m;
  }
  REQUIRE(rotation != nullptr);
  const auto t = make(kron(*rotation, Matrix<double>::identity(3)) * swap_matrix<double>(3));
  REQUIRE(is_allowed_reversible(p, t));
  const auto cert = triviality_certificate(p, t);
  REQUIRE(cert.has_value());
  CHECK(cert->sigma == std::vector<std::size_t>{2, 1});
  CHECK(cert->residual_ok);
  int moved = 0;
  for (const auto& m : cert->maps) moved += !near_identity(m);
  CHECK(moved == 1);
  CHECK(recompose(p, cert->sigma, cert->maps).max_abs_diff(t.adjoint) < 1e-9);
}

TEST_CASE("sub-unit criterion") {
  CHECK(subunit_criterion(square2(), make(Matrix<Q>::identity(9))));
  CHECK(subunit_criterion(square2(), make(swap_matrix<Q>(3))));
  CHECK_FALSE(subunit_criterion(gtrit2(), gtrit_cnot()));
}

TEST_CASE("two-term decompositions") {
  const auto& c = square2();
  const auto t = make(swap_matrix<Q>(3));
  for (const auto& e : sub_unit_effects(c, 1)) {
    const auto v = t.adjoint.apply(e.flattened);
    const auto pairs = two_term_decompositions(c, v);
    CHECK(pairs.size() >= 2);
    for (const auto& [i, j] : pairs) {
      CHECK(i != j);
      CHECK(tuple_distance(c.tuples[i], c.tuples[j]) == 1);
    }
  }
  const auto doubled = scale(c.ray_extremes[5], Q(2));
  const auto d = two_term_decompositions(c, doubled);
  REQUIRE(d.size() == 1);
  CHECK(d[0].first == d[0].second);
  const auto p = build_polygon(5);
  CHECK(two_term_decompositions(p.ray_extremes, p.unit).empty());
}

TEST_CASE("enumeration on square and pentagon composites") {
  const auto maps = enumerate_reversibles(square2());
  CHECK(maps.size() == 128);
  const auto order = oracle::symmetry_order(to_d(square2().locals[0].ray_extremes), to_d(square2().locals[0].unit));
  CHECK(maps.size() == order * order * 2);
  for (const auto& t : maps) CHECK(triviality_certificate(square2(), t).has_value());

  const auto pmaps = enumerate_reversibles(pentagon2());
  CHECK(pmaps.size() == 200);
  for (const auto& t : pmaps) CHECK(triviality_certificate(pentagon2(), t).has_value());
  CHECK(count_reversibles(pentagon2()) == 200);
}

TEST_CASE("g-trit composite has more reversibles than the trivial group") {
  SearchConfig cfg;
  cfg.node_cap = 200'000;
  std::size_t found = 0;
  try {
    found = count_reversibles(gtrit2(), cfg);
  } catch (const SearchBudgetExceeded& e) {
    found = e.partial_results();
  }
  const std::size_t local = local_symmetry_group(gtrit2().locals[0]).size();
  CHECK(found > local * local * 2);
  const auto cnot = gtrit_cnot();
  CHECK(is_allowed_reversible(gtrit2(), cnot));
  CHECK_FALSE(triviality_certificate(gtrit2(), cnot).has_value());
}

TEST_CASE("conditional CNOT on g-trits reproduces the documented map") {
  const auto& c = gtrit2();
  const auto t = gtrit_cnot();
  REQUIRE(t.ray_image.size() == 25);
  // Local order X, Y0, Y1, Z0, Z1: A (x) X fixed; A (x) B_i flips i iff A = X.
  const std::size_t flip[5] = {0, 2, 1, 4, 3};
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      const std::size_t to_b = a == 0 ? flip[b] : b;
      CHECK(t.ray_image[c.tuple_index({a, b})] == c.tuple_index({a, to_b}));
    }
  }
}

TEST_CASE("conditional construction on classical bits is the CNOT gate") {
  const auto bit = build_classical<Q>(2);
  const auto c = compose<Q>({bit, bit});
  const auto flip = default_conditional_symmetry(bit);
  const auto t = build_conditional_cnot(c, 1, 2, flip);
  CHECK(is_allowed_reversible(c, t));
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const std::size_t to_b = a == 0 ? 1 - b : b;
      CHECK(t.ray_image[c.tuple_index({a, b})] == c.tuple_index({a, to_b}));
    }
  }
}

TEST_CASE("conditional map on g-trit and square") {
  const auto c = compose<Q>({build_squashed_gtrit<Q>(), build_cube<Q>(2)});
  const auto t = build_conditional_cnot(c, 1, 2, default_conditional_symmetry(c.locals[1]));
  CHECK(is_allowed_reversible(c, t));
  CHECK(preserves_state_cone(c, t));
  CHECK_FALSE(is_adjacency_preserving(c, t));
  CHECK_FALSE(subunit_criterion(c, t));
  CHECK_THROWS_AS(build_conditional_cnot(c, 2, 1, default_conditional_symmetry(c.locals[0])), Error);
}

TEST_CASE("entanglement audit") {
  const auto& c = gtrit2();
  const auto a = entanglement_audit(c, gtrit_cnot());
  CHECK(a.permutes_product_states);
  CHECK(a.permutation.size() == 25);
  CHECK_FALSE(a.separable_to_entangled);
  REQUIRE(a.correlated_output.has_value());
  CHECK(is_separable(c, *a.correlated_output));
  CHECK_FALSE(is_product_vector(c, *a.correlated_output));
  CHECK(is_product_vector(c, *a.correlated_input));

  const auto id = entanglement_audit(c, make(Matrix<Q>::identity(16)));
  std::vector<std::size_t> expect(25);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(id.permutation == expect);

  for (const auto& t : enumerate_reversibles(square2())) CHECK(entanglement_audit(square2(), t).permutes_product_states);
}

TEST_CASE("triviality verification over a full enumeration") {
  const auto r = verify_theorem1(square2());
  CHECK(r.pass);
  CHECK(r.enumerated == 128);
  CHECK(r.trivial_group_order == 128);
  CHECK(r.proof_path_failures == 0);
  CHECK(r.factor_failures == 0);
  CHECK(r.factor_checks > 0);

  const auto so = compose<Q>({build_cube<Q>(2), build_octoplex<Q>(2)});
  const auto ro = verify_theorem1(so);
  CHECK(ro.pass);
  CHECK(ro.equivalence_classes.size() == 1);
  CHECK(ro.enumerated == 128);

  const auto gs = compose<Q>({build_squashed_gtrit<Q>(), build_cube<Q>(2)});
  CHECK_THROWS_AS(verify_theorem1(gs), Error);
}

TEST_CASE("matching tensor factors") {
  const Vec<Q> x1{Q(1), Q(0)}, x2{Q(0), Q(1)}, y1{Q(1), Q(2)}, y2{Q(3), Q(4)};
  CHECK(tensor_factors_agree<Q>({x1, x2}, {y1, y2}, {x1, x2}, {y1, y2}) == std::optional<bool>(true));
  CHECK_FALSE(tensor_factors_agree<Q>({x1, x1}, {y1, y2}, {x1, x1}, {y1, y2}).has_value());
  CHECK_FALSE(tensor_factors_agree<Q>({x1, x2}, {y1, y2}, {x1, x2}, {y2, y1}).has_value());
}

// Invariants.

TEST_CASE("adjoint consistency on basis pairs") {
  for (const auto& t : enumerate_reversibles(square2())) {
    const auto fwd = t.forward();
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t j = 0; j < 9; ++j) {
        Vec<Q> e(9, Q(0)), s(9, Q(0));
        e[i] = 1;
        s[j] = 1;
        CHECK(dot(t.adjoint.apply(e), s) == dot(e, fwd.apply(s)));
      }
    }
  }
}

TEST_CASE("certificates recompose exactly and criteria agree") {
  auto run = [](const auto& c, const auto& maps) {
    for (const auto& t : maps) {
      const auto cert = triviality_certificate(c, t);
      if (cert) CHECK(recompose(c, cert->sigma, cert->maps).max_abs_diff(t.adjoint) < 1e-9);
      if (is_adjacency_preserving(c, t)) CHECK(cert.has_value());
      CHECK(subunit_criterion(c, t) == cert.has_value());
    }
  };
  run(square2(), enumerate_reversibles(square2()));
  run(pentagon2(), enumerate_reversibles(pentagon2()));
  run(gtrit2(), std::vector<Transformation<Q>>{gtrit_cnot()});
}

TEST_CASE("enumerated reversibles form a group") {
  const auto maps = enumerate_reversibles(square2());
  std::set<std::vector<std::size_t>> images;
  for (const auto& t : maps) images.insert(t.ray_image);
  REQUIRE(images.size() == maps.size());
  for (const auto& a : maps) {
    std::vector<std::size_t> inv(a.ray_image.size());
    for (std::size_t j = 0; j < inv.size(); ++j) inv[a.ray_image[j]] = j;
    CHECK(images.count(inv));
    for (const auto& b : maps) {
      std::vector<std::size_t> ab(a.ray_image.size());
      for (std::size_t j = 0; j < ab.size(); ++j) ab[j] = a.ray_image[b.ray_image[j]];
      CHECK(images.count(ab));
    }
  }
  // Matrix products agree with the permutation products on a sample.
  const auto ab = maps[3].adjoint * maps[7].adjoint;
  CHECK(is_allowed_reversible(square2(), make(ab)));
}
