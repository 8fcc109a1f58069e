#include <atomic>
#include <cstdlib>
#include <string>

#include "gptlab/errors.hpp"
#include "gptlab/kernels.hpp"

namespace gptlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("GPTLAB_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, "kernel operands differ in length");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active_isa() == Isa::avx2 ? avx2::dot(a.data(), b.data(), a.size())
                                   : scalar::dot(a.data(), b.data(), a.size());
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  check_same_size(m.size(), rows * cols);
  check_same_size(x.size(), cols);
  check_same_size(y.size(), rows);
  if (active_isa() == Isa::avx2) {
    avx2::matvec(m.data(), rows, cols, x.data(), y.data());
  } else {
    scalar::matvec(m.data(), rows, cols, x.data(), y.data());
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size());
  if (active_isa() == Isa::avx2) {
    avx2::axpy(alpha, x.data(), y.data(), x.size());
  } else {
    scalar::axpy(alpha, x.data(), y.data(), x.size());
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active_isa() == Isa::avx2 ? avx2::max_abs_diff(a.data(), b.data(), a.size())
                                   : scalar::max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace gptlab::kernels
