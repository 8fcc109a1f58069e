#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace gptlab {

using Rational = mpq_class;

enum class ScalarMode { exact, floating };

std::string_view to_string(ScalarMode mode);

/// Global float tolerance for rank and sign decisions (default 1e-9, GPTLAB_EPS overrides).
double float_eps();
void set_float_eps(double eps);

/// Tolerance for matching effect vectors against a canonical list.
inline constexpr double kMatchTolerance = 1e-6;

template <class F>
struct Field;

template <>
struct Field<Rational> {
  static constexpr ScalarMode mode = ScalarMode::exact;
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static int sign(const Rational& x) { return sgn(x); }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  // Exact comparison; the tolerance argument exists so generic code can call one overload.
  static bool near(const Rational& a, const Rational& b, double /*tol*/) { return a == b; }
};

template <>
struct Field<double> {
  static constexpr ScalarMode mode = ScalarMode::floating;
  static bool is_zero(double x) { return std::fabs(x) <= float_eps(); }
  static int sign(double x) { return is_zero(x) ? 0 : (x > 0 ? 1 : -1); }
  static double abs(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }
  static double ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
};

template <class F>
bool is_zero(const F& x) {
  return Field<F>::is_zero(x);
}

template <class F>
int sign(const F& x) {
  return Field<F>::sign(x);
}

template <class F>
constexpr ScalarMode scalar_mode() {
  return Field<F>::mode;
}

/// "p/q" (or "p") for exact values, 17 significant digits for doubles.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

/// Parses "p/q", "p", or a decimal literal into an exact rational.
Rational parse_rational(std::string_view text);

}  // namespace gptlab
