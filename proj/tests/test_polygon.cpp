#include "doctest.h"

#include <numbers>

#include "gptlab/polygon.hpp"
#include "helpers.hpp"

using namespace gptlab;

namespace {

const double kPi = std::numbers::pi;

CompositeSystem<double> polygon_pair(int n) { return compose<double>({build_polygon(n), build_polygon(n)}); }

template <class F>
Matrix<F> swap_matrix(std::size_t d) {
  Matrix<F> s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(j * d + i, i * d + j) = F(1);
  }
  return s;
}

Transformation<double> make(const Matrix<double>& m) { return {m, {}}; }

}  // namespace

TEST_CASE("frame radius and pairing") {
  const auto f5 = polygon_frame(5);
  CHECK(f5.r == doctest::Approx(std::sqrt(1.0 / std::cos(kPi / 5))));
  CHECK(f5.r == doctest::Approx(1.1118).epsilon(1e-4));
  for (int n = 3; n <= 9; ++n) CHECK(frame_pairing_deviation(polygon_frame(n)) < 1e-12);
  CHECK_THROWS_AS(polygon_frame(2), Error);
}

TEST_CASE("triangle frame vectors sit at 120 degrees") {
  const auto f3 = polygon_frame(3);
  for (int i = 0; i < 3; ++i) {
    const auto& a = f3.effects_tilde[i];
    const auto& b = f3.effects_tilde[(i + 1) % 3];
    const double cosang = (a[1] * b[1] + a[2] * b[2]) / (std::hypot(a[1], a[2]) * std::hypot(b[1], b[2]));
    CHECK(cosang == doctest::Approx(-0.5));
  }
}

TEST_CASE("frame identity") {
  CHECK(frame_identity_deviation(polygon_frame(5)) < 1e-12);
  CHECK(frame_identity_deviation(polygon_frame(7)) < 1e-12);
  CHECK(frame_identity_check(polygon_frame(5)));
  const auto f5 = polygon_frame(5);
  CHECK(frame_identity_check(std::vector<PolygonFrame>{f5, f5}));
  CHECK(frame_identity_deviation(std::vector<PolygonFrame>{f5, f5}) < 1e-10);
}

TEST_CASE("inner-product classes") {
  const auto c5 = inner_product_classes(5);
  CHECK(c5.self == 3.0);
  CHECK(c5.c_max == doctest::Approx(1.6180).epsilon(1e-4));
  CHECK(c5.c_min == doctest::Approx(-0.6180).epsilon(1e-4));
  const auto c3 = inner_product_classes(3);
  CHECK(c3.c_max == 0.0);
  CHECK(c3.c_min == 0.0);
  const auto c7 = inner_product_classes(7);
  CHECK(c7.c_max == doctest::Approx(2.2470).epsilon(1e-4));
  CHECK(c7.c_min == doctest::Approx(-0.8019).epsilon(1e-4));
  CHECK_THROWS_AS(inner_product_classes(6), Error);

  const auto f5 = polygon_frame(5);
  CHECK(dot(f5.effects_tilde[0], f5.effects_tilde[1]) == doctest::Approx(c5.c_max));
  CHECK(dot(f5.effects_tilde[0], f5.effects_tilde[0]) == doctest::Approx(3.0));
}

TEST_CASE("relations and opposite witnesses") {
  const auto f5 = polygon_frame(5);
  CHECK(relation(f5, 1, 2) == PolygonRelation::neighboring);
  CHECK(relation(f5, 1, 4) == PolygonRelation::opposite);
  CHECK(relation(f5, 2, 2) == PolygonRelation::identical);
  CHECK_THROWS_AS(relation(f5, 0, 2), Error);
  CHECK(opposite_pair_witness(f5, 1, 2) == 4);
  CHECK(dot(f5.effects_tilde[3], f5.effects_tilde[0]) == doctest::Approx(inner_product_classes(5).c_min));
  CHECK(dot(f5.effects_tilde[3], f5.effects_tilde[1]) == doctest::Approx(inner_product_classes(5).c_min));
  CHECK_THROWS_AS(opposite_pair_witness(f5, 1, 3), Error);

  const auto f7 = polygon_frame(7);
  const int s = opposite_pair_witness(f7, 1, 2);
  int hits = 0;
  for (int k = 1; k <= 7; ++k) {
    hits += relation(f7, k, 1) == PolygonRelation::opposite && relation(f7, k, 2) == PolygonRelation::opposite;
  }
  CHECK(hits == 1);
  CHECK(relation(f7, s, 1) == PolygonRelation::opposite);
}

TEST_CASE("orthogonality in the tilde frame") {
  const auto c = polygon_pair(5);
  const auto f = polygon_frame(5);
  const std::vector<PolygonFrame> frames{f, f};
  const auto group = local_symmetry_group(c.locals[0]);
  for (const auto& g : group) {
    const auto r = orthogonality_check(c, frames, make(kron(g, Matrix<double>::identity(3))));
    CHECK(r.orthogonal);
    CHECK(r.gram_preserved);
  }
  CHECK(orthogonality_check(c, frames, make(swap_matrix<double>(3))).orthogonal);
  for (const auto& t : enumerate_reversibles(c)) {
    const auto r = orthogonality_check(c, frames, t);
    CHECK(r.deviation < 1e-8);
  }
  Matrix<double> bad = Matrix<double>::identity(9);
  bad(4, 4) = 2.0;
  CHECK_THROWS_AS(orthogonality_check(c, frames, make(bad)), Error);
}

TEST_CASE("odd-polygon argument") {
  const auto c5 = polygon_pair(5);
  for (const auto& t : enumerate_reversibles(c5)) {
    const auto r = odd_polygon_triviality_check(c5, t);
    CHECK(r.passed());
    CHECK(r.certificate.has_value());
  }

  const auto c7 = polygon_pair(7);
  const auto group = local_symmetry_group(c7.locals[0]);
  std::vector<Matrix<double>> samples{Matrix<double>::identity(9), swap_matrix<double>(3)};
  for (std::size_t k = 0; k < group.size(); k += 3) {
    samples.push_back(kron(group[k], Matrix<double>::identity(3)));
    samples.push_back(kron(Matrix<double>::identity(3), group[k]) * swap_matrix<double>(3));
  }
  for (const auto& m : samples) {
    const auto r = odd_polygon_triviality_check(c7, make(m));
    CHECK(r.passed());
  }

  const auto c3 = polygon_pair(3);
  const auto r3 = odd_polygon_triviality_check(c3, make(Matrix<double>::identity(9)));
  REQUIRE(r3.failed_step.has_value());
  CHECK(*r3.failed_step == "extremal-inner-product-uniqueness");
  CHECK(r3.steps.size() == 1);

  CHECK_THROWS_AS(odd_polygon_triviality_check(polygon_pair(6), make(Matrix<double>::identity(9))), Error);
}

// Invariants.

TEST_CASE("frame consistency and trigonometric sums") {
  for (int n = 3; n <= 11; ++n) {
    CAPTURE(n);
    const auto f = polygon_frame(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) CHECK(f.effects_tilde[i][k] == doctest::Approx(f.lambda(k, k) * f.effects[i][k]));
    }
    double s = 0, c = 0, sc = 0, s2 = 0, c2 = 0;
    for (int i = 1; i <= n; ++i) {
      const double a = 2 * kPi * i / n;
      s += std::sin(a);
      c += std::cos(a);
      sc += std::sin(a) * std::cos(a);
      s2 += std::sin(a) * std::sin(a);
      c2 += std::cos(a) * std::cos(a);
    }
    CHECK(std::fabs(s) < 1e-12);
    CHECK(std::fabs(c) < 1e-12);
    CHECK(std::fabs(sc) < 1e-12);
    CHECK(std::fabs(s2 - n / 2.0) < 1e-12);
    CHECK(std::fabs(c2 - n / 2.0) < 1e-12);
    if (n % 2 == 1 && n > 3) {
      const auto cl = inner_product_classes(n);
      CHECK(cl.c_max != doctest::Approx(cl.c_min));
      CHECK(std::fabs(cl.c_max) < 3.0);
      CHECK(std::fabs(cl.c_min) < 3.0);
    }
  }
}

TEST_CASE("every reversible on small polygon composites is orthogonal") {
  for (int n : {3, 4, 5}) {
    CAPTURE(n);
    const auto c = polygon_pair(n);
    const auto f = polygon_frame(n);
    for (const auto& t : enumerate_reversibles(c)) {
      CHECK(orthogonality_check(c, {f, f}, t).deviation < 1e-8);
    }
  }
}
