#pragma once

// Reparametrized polygon frame in which reversible maps of polygon composites
// are orthogonal, and the odd-polygon adjacency argument built on it.

#include <optional>
#include <string>
#include <vector>

#include "gptlab/dynamics.hpp"

namespace gptlab {

struct PolygonFrame {
  int n = 0;
  double r = 0.0;
  std::vector<Vec<double>> effects;        // e_i, i = 1..n stored at i-1
  std::vector<Vec<double>> effects_tilde;  // Lambda e_i
  Matrix<double> lambda;                   // diagonal, 3x3
  std::vector<Vec<double>> states;         // pure states derived by duality
  std::vector<Vec<double>> states_tilde;   // Lambda^{-1} s
};

PolygonFrame polygon_frame(int n);

/// Largest entry of |<e~_i, s~_j> - <e_i, s_j>| over the frame.
double frame_pairing_deviation(const PolygonFrame& frame);

/// max |sum_i e~_i e~_i^T - n I|.
double frame_identity_deviation(const PolygonFrame& frame);

/// Same identity for composites: products over all tuples, against (prod n) I.
double frame_identity_deviation(const std::vector<PolygonFrame>& frames);

bool frame_identity_check(const PolygonFrame& frame, double tol = 1e-12);
bool frame_identity_check(const std::vector<PolygonFrame>& frames, double tol = 1e-10);

struct InnerProductClasses {
  double self = 3.0;
  double c_max = 0.0;
  double c_min = 0.0;
  std::vector<int> neighbor_offsets;  // {-1, +1}
  std::vector<int> opposite_offsets;  // {(n-1)/2, (n+1)/2}
};

InnerProductClasses inner_product_classes(int n);

enum class PolygonRelation { identical, neighboring, opposite, other };

std::string_view to_string(PolygonRelation r);

/// Classification of 1-based indices i, j by offset mod n.
PolygonRelation relation(const PolygonFrame& frame, int i, int j);

/// The unique index opposite to both neighbours i and j (1-based).
int opposite_pair_witness(const PolygonFrame& frame, int i, int j);

/// Lambda over all subsystems, as a (3^N)x(3^N) diagonal matrix.
Matrix<double> composite_lambda(const std::vector<PolygonFrame>& frames);

/// Adjoint expressed in the tilde frame: Lambda A Lambda^{-1}.
Matrix<double> tilde_adjoint(const std::vector<PolygonFrame>& frames, const Matrix<double>& adjoint);

struct OrthogonalityResult {
  bool orthogonal = false;
  double deviation = 0.0;          // max |A~^T A~ - I|
  bool gram_preserved = false;
  double gram_deviation = 0.0;     // max |A~ G A~^T - G|, G = sum e~ e~^T
};

/// Polygon composites only; `c` must be built from build_polygon systems matching `frames`.
OrthogonalityResult orthogonality_check(const CompositeSystem<double>& c, const std::vector<PolygonFrame>& frames,
                                        const Transformation<double>& t, double tol = 1e-8);

struct ArgumentStep {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OddPolygonReport {
  int n = 0;
  std::size_t subsystems = 0;
  std::vector<ArgumentStep> steps;
  std::optional<std::string> failed_step;
  std::optional<TrivialityCertificate<double>> certificate;

  bool passed() const { return !failed_step.has_value(); }
};

/// Walks the odd-polygon adjacency argument for one transformation and stops at
/// the first step that does not go through.
OddPolygonReport odd_polygon_triviality_check(const CompositeSystem<double>& c, const Transformation<double>& t);

}  // namespace gptlab
