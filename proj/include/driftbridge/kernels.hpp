// Data-parallel arithmetic kernels behind the numeric modules.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active variant is picked once at runtime from
// CPUID, or forced through DRIFTBRIDGE_SIMD=scalar|avx2|auto. The scalar
// path is the semantic reference; the SIMD paths are equivalence-tested
// against it.
#pragma once

#include <cstddef>

namespace driftbridge::kernels {

enum class Isa { scalar, avx2 };

// Variant selected for this process (env override, else CPUID).
Isa active_isa();
const char* isa_name(Isa isa);

struct MinPlusResult {
  double value;
  std::size_t index;
};

// Dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// min over i of a[i] + b[i]; ties resolve to the lowest index.
MinPlusResult min_plus(const double* a, const double* b, std::size_t n);
// y = A x for row-major A (rows x cols).
void matvec(const double* A, std::size_t rows, std::size_t cols,
            const double* x, double* y);
// w' A w for row-major square A.
double quadratic_form(const double* A, std::size_t n, const double* w);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
MinPlusResult min_plus(const double* a, const double* b, std::size_t n);
void matvec(const double* A, std::size_t rows, std::size_t cols,
            const double* x, double* y);
double quadratic_form(const double* A, std::size_t n, const double* w);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DRIFTBRIDGE_HAVE_AVX2_BUILD 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
MinPlusResult min_plus(const double* a, const double* b, std::size_t n);
void matvec(const double* A, std::size_t rows, std::size_t cols,
            const double* x, double* y);
double quadratic_form(const double* A, std::size_t n, const double* w);
}  // namespace avx2
#else
#define DRIFTBRIDGE_HAVE_AVX2_BUILD 0
#endif

}  // namespace driftbridge::kernels
