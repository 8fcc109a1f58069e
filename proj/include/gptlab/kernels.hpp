#pragma once

// Float-mode inner loops. Each kernel has a portable scalar reference and an
// AVX2/FMA variant; the variant is picked once at runtime from CPUID, and can
// be forced back to scalar with GPTLAB_SIMD=scalar.

#include <cstddef>
#include <span>
#include <string_view>

namespace gptlab::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// ISA supported by the running CPU (ignores the environment override).
Isa detected_isa();

/// ISA the dispatched entry points currently use.
Isa active_isa();

/// Override the dispatch target; requesting avx2 on a CPU without it falls back to scalar.
void set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
// y = M x, M row-major rows x cols.
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void matvec(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2

}  // namespace gptlab::kernels
