#include "gptlab/polygon.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gptlab {

namespace {

constexpr double kPi = std::numbers::pi;

double max_dev_from_scaled_identity(const Matrix<double>& m, double scale) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      worst = std::max(worst, std::fabs(m(r, c) - (r == c ? scale : 0.0)));
    }
  }
  return worst;
}

Matrix<double> outer_sum(const std::vector<Vec<double>>& vs, std::size_t dim) {
  Matrix<double> g(dim, dim);
  for (const auto& v : vs) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) g(r, c) += v[r] * v[c];
    }
  }
  return g;
}

void require_polygon_composite(const CompositeSystem<double>& c, const std::vector<PolygonFrame>& frames) {
  if (frames.size() != c.subsystem_count()) throw Error(ErrorCode::DimensionMismatch, "one frame per subsystem");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& l = c.locals[k];
    if (l.kind != SystemKind::polygon || l.parameter != frames[k].n) {
      throw Error(ErrorCode::InvalidParameter, "subsystem is not the polygon described by its frame");
    }
  }
}

}  // namespace

PolygonFrame polygon_frame(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidParameter, "polygon frame needs n >= 3");
  PolygonFrame f;
  f.n = n;
  f.r = std::sqrt(1.0 / std::cos(kPi / n));
  const double k = 1.0 / (1.0 + f.r * f.r);
  for (int i = 1; i <= n; ++i) {
    const double angle = 2.0 * kPi * i / n;
    f.effects.push_back({k, k * f.r * std::sin(angle), k * f.r * std::cos(angle)});
  }
  f.lambda = Matrix<double>(3, 3);
  const double scale = 1.0 + f.r * f.r;
  f.lambda(0, 0) = scale;
  f.lambda(1, 1) = scale * std::sqrt(2.0) / f.r;
  f.lambda(2, 2) = scale * std::sqrt(2.0) / f.r;
  for (const auto& e : f.effects) f.effects_tilde.push_back(f.lambda.apply(e));

  const auto sys = make_system<double>(fmt::format("frame-{}", n), {1.0, 0.0, 0.0}, f.effects);
  f.states = sys.pure_states;
  for (const auto& s : f.states) {
    f.states_tilde.push_back({s[0] / f.lambda(0, 0), s[1] / f.lambda(1, 1), s[2] / f.lambda(2, 2)});
  }
  return f;
}

double frame_pairing_deviation(const PolygonFrame& frame) {
  double worst = 0.0;
  for (std::size_t i = 0; i < frame.effects.size(); ++i) {
    for (std::size_t j = 0; j < frame.states.size(); ++j) {
      worst = std::max(worst, std::fabs(dot(frame.effects_tilde[i], frame.states_tilde[j]) -
                                        dot(frame.effects[i], frame.states[j])));
    }
  }
  return worst;
}

double frame_identity_deviation(const PolygonFrame& frame) {
  return max_dev_from_scaled_identity(outer_sum(frame.effects_tilde, 3), frame.n);
}

double frame_identity_deviation(const std::vector<PolygonFrame>& frames) {
  if (frames.empty()) throw Error(ErrorCode::InvalidParameter, "no frames");
  std::vector<Vec<double>> products{{1.0}};
  double count = 1.0;
  for (const auto& f : frames) {
    std::vector<Vec<double>> next;
    for (const auto& p : products) {
      for (const auto& e : f.effects_tilde) next.push_back(tensor(p, e));
    }
    products = std::move(next);
    count *= f.n;
  }
  return max_dev_from_scaled_identity(outer_sum(products, products.front().size()), count);
}

bool frame_identity_check(const PolygonFrame& frame, double tol) { return frame_identity_deviation(frame) < tol; }

bool frame_identity_check(const std::vector<PolygonFrame>& frames, double tol) {
  return frame_identity_deviation(frames) < tol;
}

InnerProductClasses inner_product_classes(int n) {
  if (n < 3 || n % 2 == 0) throw Error(ErrorCode::InvalidParameter, "inner-product classes need odd n >= 3");
  InnerProductClasses out;
  out.c_max = 1.0 + 2.0 * std::cos(2.0 * kPi / n);
  out.c_min = 1.0 - 2.0 * std::cos(kPi / n);
  // At n = 3 both values are zero up to rounding.
  if (std::fabs(out.c_max) < 1e-12) out.c_max = 0.0;
  if (std::fabs(out.c_min) < 1e-12) out.c_min = 0.0;
  out.neighbor_offsets = {-1, 1};
  out.opposite_offsets = {(n - 1) / 2, (n + 1) / 2};
  return out;
}

std::string_view to_string(PolygonRelation r) {
  switch (r) {
    case PolygonRelation::identical: return "identical";
    case PolygonRelation::neighboring: return "neighboring";
    case PolygonRelation::opposite: return "opposite";
    case PolygonRelation::other: return "other";
  }
  return "other";
}

PolygonRelation relation(const PolygonFrame& frame, int i, int j) {
  const int n = frame.n;
  if (i < 1 || i > n || j < 1 || j > n) throw Error(ErrorCode::IndexOutOfRange, "polygon effect index");
  const int d = ((j - i) % n + n) % n;
  PolygonRelation rel = PolygonRelation::other;
  if (d == 0) {
    rel = PolygonRelation::identical;
  } else if (d == 1 || d == n - 1) {
    rel = PolygonRelation::neighboring;
  } else if (n % 2 == 1 ? (d == (n - 1) / 2 || d == (n + 1) / 2) : d == n / 2) {
    rel = PolygonRelation::opposite;
  }
  if (n % 2 == 1 && n > 3 && rel != PolygonRelation::other) {
    const auto classes = inner_product_classes(n);
    const double expected = rel == PolygonRelation::identical    ? classes.self
                            : rel == PolygonRelation::neighboring ? classes.c_max
                                                                  : classes.c_min;
    const double actual = dot(frame.effects_tilde[i - 1], frame.effects_tilde[j - 1]);
    if (std::fabs(actual - expected) > 1e-9) {
      throw Error(ErrorCode::NumericallyDegenerate, "offset class disagrees with the inner product");
    }
  }
  return rel;
}

int opposite_pair_witness(const PolygonFrame& frame, int i, int j) {
  if (relation(frame, i, j) != PolygonRelation::neighboring) {
    throw Error(ErrorCode::NotNeighboring, fmt::format("effects {} and {} are not neighbouring", i, j));
  }
  std::vector<int> hits;
  for (int s = 1; s <= frame.n; ++s) {
    if (s == i || s == j) continue;
    if (relation(frame, s, i) == PolygonRelation::opposite && relation(frame, s, j) == PolygonRelation::opposite) {
      hits.push_back(s);
    }
  }
  if (hits.size() != 1) {
    throw Error(ErrorCode::ArgumentStepFailed,
                fmt::format("{} effects opposite to both {} and {}", hits.size(), i, j));
  }
  return hits.front();
}

Matrix<double> composite_lambda(const std::vector<PolygonFrame>& frames) {
  Matrix<double> out = Matrix<double>::identity(1);
  for (const auto& f : frames) out = kron(out, f.lambda);
  return out;
}

Matrix<double> tilde_adjoint(const std::vector<PolygonFrame>& frames, const Matrix<double>& adjoint) {
  const Matrix<double> lambda = composite_lambda(frames);
  if (adjoint.rows() != lambda.rows() || adjoint.cols() != lambda.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "adjoint shape differs from the frame dimension");
  }
  Matrix<double> out(adjoint.rows(), adjoint.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = lambda(r, r) * adjoint(r, c) / lambda(c, c);
  }
  return out;
}

OrthogonalityResult orthogonality_check(const CompositeSystem<double>& c, const std::vector<PolygonFrame>& frames,
                                        const Transformation<double>& t, double tol) {
  require_polygon_composite(c, frames);
  if (!is_allowed_reversible(c, t)) throw Error(ErrorCode::NotAllowed, "transformation is not allowed-reversible");
  const Matrix<double> a = tilde_adjoint(frames, t.adjoint);
  OrthogonalityResult out;
  out.deviation = max_dev_from_scaled_identity(a.transpose() * a, 1.0);
  out.orthogonal = out.deviation < tol;

  const Matrix<double> lambda = composite_lambda(frames);
  std::vector<Vec<double>> tilde_rays;
  for (const auto& r : c.ray_extremes) tilde_rays.push_back(lambda.apply(r));
  const Matrix<double> g = outer_sum(tilde_rays, c.dim);
  const Matrix<double> moved = a * g * a.transpose();
  double scale = 0.0;
  for (double x : g.data()) scale = std::max(scale, std::fabs(x));
  out.gram_deviation = moved.max_abs_diff(g);
  out.gram_preserved = out.gram_deviation < tol * std::max(1.0, scale);
  return out;
}

OddPolygonReport odd_polygon_triviality_check(const CompositeSystem<double>& c, const Transformation<double>& t) {
  const int n = c.locals.front().parameter;
  for (const auto& l : c.locals) {
    if (l.kind != SystemKind::polygon || l.parameter != n) {
      throw Error(ErrorCode::InvalidParameter, "composite must consist of identical polygons");
    }
  }
  if (n % 2 == 0) throw Error(ErrorCode::InvalidParameter, "odd polygons only");
  if (!is_allowed_reversible(c, t)) throw Error(ErrorCode::NotAllowed, "transformation is not allowed-reversible");

  OddPolygonReport report;
  report.n = n;
  report.subsystems = c.subsystem_count();
  const std::size_t big_n = c.subsystem_count();
  const PolygonFrame frame = polygon_frame(n);
  const std::vector<PolygonFrame> frames(big_n, frame);
  const auto classes = inner_product_classes(n);
  const auto perm = *ray_permutation(c, t.adjoint);
  const Matrix<double> lambda = composite_lambda(frames);
  std::vector<Vec<double>> tilde_rays;
  for (const auto& r : c.ray_extremes) tilde_rays.push_back(lambda.apply(r));

  auto record = [&](std::string name, bool passed, std::string detail) {
    report.steps.push_back({name, passed, std::move(detail)});
    if (!passed && !report.failed_step) report.failed_step = std::move(name);
    return passed;
  };
  auto label_relation = [&](std::size_t a, std::size_t b) {
    return relation(frame, static_cast<int>(a) + 1, static_cast<int>(b) + 1);
  };

  // Step 1: extremal inner products occur only between adjacent neighbouring / opposite pairs.
  {
    const double power = std::pow(3.0, static_cast<double>(big_n) - 1.0);
    const double want_max = power * classes.c_max;
    const double want_min = power * classes.c_min;
    double got_max = -1e300, got_min = 1e300;
    std::size_t stray_max = 0, stray_min = 0;
    for (std::size_t a = 0; a < tilde_rays.size(); ++a) {
      for (std::size_t b = a + 1; b < tilde_rays.size(); ++b) {
        const double ip = dot(tilde_rays[a], tilde_rays[b]);
        got_max = std::max(got_max, ip);
        got_min = std::min(got_min, ip);
        const auto slot = tuple_adjacency(c.tuples[a], c.tuples[b]);
        const auto rel = slot ? label_relation(c.tuples[a][*slot - 1], c.tuples[b][*slot - 1]) : PolygonRelation::other;
        if (std::fabs(ip - want_max) < 1e-9 && rel != PolygonRelation::neighboring) ++stray_max;
        if (std::fabs(ip - want_min) < 1e-9 && rel != PolygonRelation::opposite) ++stray_min;
      }
    }
    const bool distinct = std::fabs(classes.c_max - classes.c_min) > 1e-9;
    const bool ok = distinct && std::fabs(got_max - want_max) < 1e-9 && std::fabs(got_min - want_min) < 1e-9 &&
                    stray_max == 0 && stray_min == 0;
    const std::string detail =
        fmt::format("C_max={:.6f} C_min={:.6f}; max={:.6f} min={:.6f}; {} non-neighbouring pairs at the maximum, "
                    "{} non-opposite pairs at the minimum",
                    classes.c_max, classes.c_min, got_max, got_min, stray_max, stray_min);
    if (!record("extremal-inner-product-uniqueness", ok, detail)) return report;
  }

  // Step 2: the map is orthogonal in the tilde frame, so inner products are preserved.
  {
    const auto orth = orthogonality_check(c, frames, t);
    if (!record("orthogonality", orth.orthogonal && orth.gram_preserved,
                fmt::format("max|A^T A - I| = {:.3e}", orth.deviation))) {
      return report;
    }
  }

  const int s_label = opposite_pair_witness(frame, 1, 2);
  // Step 3: images of (e1, e2, e3) are adjacent on a common slot with the same relations.
  // Step 4: every effect adjacent to e1 on slot k lies in span{e1, e2, e3} and keeps adjacency.
  {
    std::string trouble;
    std::string fiber_trouble;
    const Matrix<double> local_triple =
        Matrix<double>::from_columns(std::vector<Vec<double>>{frame.effects_tilde[0], frame.effects_tilde[1],
                                                              frame.effects_tilde[s_label - 1]},
                                     3);
    const bool independent = rank(local_triple) == 3;
    if (!independent) fiber_trouble = "local triple is linearly dependent";
    for (std::size_t j = 0; j < c.ray_count() && trouble.empty(); ++j) {
      for (std::size_t k = 0; k < big_n && trouble.empty(); ++k) {
        if (c.tuples[j][k] != 0) continue;
        auto t2 = c.tuples[j];
        t2[k] = 1;
        auto t3 = c.tuples[j];
        t3[k] = static_cast<std::size_t>(s_label - 1);
        const std::size_t i1 = j, i2 = c.tuple_index(t2), i3 = c.tuple_index(t3);
        const auto& f1 = c.tuples[perm[i1]];
        const auto& f2 = c.tuples[perm[i2]];
        const auto& f3 = c.tuples[perm[i3]];
        const auto k12 = tuple_adjacency(f1, f2);
        const auto k13 = tuple_adjacency(f1, f3);
        const auto k23 = tuple_adjacency(f2, f3);
        if (!k12 || k12 != k13 || k12 != k23) {
          trouble = fmt::format("images of ray {} triple on slot {} are not adjacent on one slot", j, k + 1);
          break;
        }
        const std::size_t kk = *k12 - 1;
        if (label_relation(f1[kk], f2[kk]) != PolygonRelation::neighboring ||
            label_relation(f3[kk], f1[kk]) != PolygonRelation::opposite ||
            label_relation(f3[kk], f2[kk]) != PolygonRelation::opposite) {
          trouble = fmt::format("images of ray {} triple on slot {} break the relations", j, k + 1);
          break;
        }
        if (!fiber_trouble.empty()) continue;
        for (std::size_t a = 1; a < c.locals[k].ray_count(); ++a) {
          auto tf = c.tuples[j];
          tf[k] = a;
          const std::size_t idx = c.tuple_index(tf);
          const std::vector<Vec<double>> span{tilde_rays[i1], tilde_rays[i2], tilde_rays[i3], tilde_rays[idx]};
          if (rank_of<double>(span) != 3) {
            fiber_trouble = fmt::format("ray {} escapes the span of its triple", idx);
            break;
          }
          if (tuple_adjacency(f1, c.tuples[perm[idx]]) != k12) {
            fiber_trouble = fmt::format("image of ray {} leaves slot {}", idx, *k12);
            break;
          }
        }
      }
    }
    if (!record("image-structure", trouble.empty(), trouble.empty() ? "all triples keep their relations" : trouble)) {
      return report;
    }
    if (!record("adjacency-fiber-span", fiber_trouble.empty(),
                fiber_trouble.empty() ? "every adjacency fiber spanned by its triple" : fiber_trouble)) {
      return report;
    }
  }

  if (!record("adjacency-preserving", is_adjacency_preserving(c, t), "all adjacent pairs checked")) return report;
  report.certificate = triviality_certificate(c, t);
  record("triviality-certificate", report.certificate.has_value(),
         report.certificate ? "recomposition reproduces the adjoint" : "no certificate");
  return report;
}

}  // namespace gptlab
