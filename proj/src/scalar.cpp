#include "gptlab/scalar.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cstdlib>
#include <string>

#include "gptlab/errors.hpp"

namespace gptlab {

namespace {

double initial_eps() {
  if (const char* env = std::getenv("GPTLAB_EPS"); env != nullptr) {
    char* end = nullptr;
    double value = std::strtod(env, &end);
    if (end != env && value > 0.0) return value;
  }
  return 1e-9;
}

std::atomic<double>& eps_storage() {
  static std::atomic<double> eps{initial_eps()};
  return eps;
}

}  // namespace

std::string_view to_string(ScalarMode mode) {
  return mode == ScalarMode::exact ? "exact" : "float";
}

double float_eps() { return eps_storage().load(std::memory_order_relaxed); }

void set_float_eps(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
  eps_storage().store(eps, std::memory_order_relaxed);
}

std::string format_scalar(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string format_scalar(double x) {
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", x);
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { return Error(ErrorCode::ParseError, "not a rational: '" + s + "'"); };
  if (s.empty()) throw fail();
  try {
    if (auto dot = s.find_first_of(".eE"); dot != std::string::npos && s.find('/') == std::string::npos) {
      // Decimal literal: read it exactly as mantissa * 10^exponent.
      std::string mantissa = s;
      long exponent = 0;
      if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        exponent = std::stol(s.substr(e + 1));
      }
      if (auto p = mantissa.find('.'); p != std::string::npos) {
        exponent -= static_cast<long>(mantissa.size() - p - 1);
        mantissa.erase(p, 1);
      }
      mpz_class num(mantissa, 10);
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
      Rational r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
      r.canonicalize();
      return r;
    }
    Rational r(s, 10);
    if (r.get_den() == 0) throw fail();
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw fail();
  } catch (const std::out_of_range&) {
    throw fail();
  }
}

}  // namespace gptlab
