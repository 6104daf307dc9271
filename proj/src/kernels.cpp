// Runtime dispatch between the scalar reference kernels and the AVX2 build.
#include "driftbridge/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace driftbridge::kernels {

namespace {

Isa select_isa() {
  const char* env = std::getenv("DRIFTBRIDGE_SIMD");
#if DRIFTBRIDGE_HAVE_AVX2_BUILD
  const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  const bool cpu_ok = false;
#endif
  if (env && *env) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_ok)
        throw std::runtime_error("DRIFTBRIDGE_SIMD=avx2 requested but AVX2+FMA is unavailable");
      return Isa::avx2;
    }
    if (std::strcmp(env, "auto") != 0)
      throw std::runtime_error("DRIFTBRIDGE_SIMD must be auto, scalar, or avx2");
  }
  return cpu_ok ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const char* isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

#if DRIFTBRIDGE_HAVE_AVX2_BUILD
#define DRIFTBRIDGE_DISPATCH(fn, ...) \
  return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#define DRIFTBRIDGE_DISPATCH_VOID(fn, ...)                       \
  if (active_isa() == Isa::avx2) return avx2::fn(__VA_ARGS__); \
  return scalar::fn(__VA_ARGS__)
#else
#define DRIFTBRIDGE_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#define DRIFTBRIDGE_DISPATCH_VOID(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(const double* a, const double* b, std::size_t n) {
  DRIFTBRIDGE_DISPATCH(dot, a, b, n);
}

double sum(const double* a, std::size_t n) { DRIFTBRIDGE_DISPATCH(sum, a, n); }

double squared_distance(const double* a, const double* b, std::size_t n) {
  DRIFTBRIDGE_DISPATCH(squared_distance, a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  DRIFTBRIDGE_DISPATCH_VOID(axpy, alpha, x, y, n);
}

MinPlusResult min_plus(const double* a, const double* b, std::size_t n) {
  DRIFTBRIDGE_DISPATCH(min_plus, a, b, n);
}

void matvec(const double* A, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  DRIFTBRIDGE_DISPATCH_VOID(matvec, A, rows, cols, x, y);
}

double quadratic_form(const double* A, std::size_t n, const double* w) {
  DRIFTBRIDGE_DISPATCH(quadratic_form, A, n, w);
}

}  // namespace driftbridge::kernels
