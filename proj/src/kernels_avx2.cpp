// AVX2+FMA variants. Compiled with -mavx2 -mfma; only ever called after the
// dispatcher has confirmed CPU support.
#include "driftbridge/kernels.hpp"

#if DRIFTBRIDGE_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cstdint>
#include <limits>

namespace driftbridge::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

MinPlusResult min_plus(const double* a, const double* b, std::size_t n) {
  MinPlusResult best{std::numeric_limits<double>::infinity(), 0};
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256i vidx = _mm256_setzero_si256();
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      const __m256d lt = _mm256_cmp_pd(v, vmin, _CMP_LT_OQ);
      vmin = _mm256_blendv_pd(vmin, v, lt);
      const __m256i cur = _mm256_set_epi64x(
          static_cast<long long>(i + 3), static_cast<long long>(i + 2),
          static_cast<long long>(i + 1), static_cast<long long>(i));
      vidx = _mm256_blendv_epi8(vidx, cur, _mm256_castpd_si256(lt));
    }
    alignas(32) double vals[4];
    alignas(32) std::int64_t idxs[4];
    _mm256_store_pd(vals, vmin);
    _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), vidx);
    for (int lane = 0; lane < 4; ++lane) {
      const auto idx = static_cast<std::size_t>(idxs[lane]);
      if (vals[lane] < best.value ||
          (vals[lane] == best.value && idx < best.index)) {
        best.value = vals[lane];
        best.index = idx;
      }
    }
  }
  for (; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < best.value) {
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

void matvec(const double* A, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(A + i * cols, x, cols);
}

double quadratic_form(const double* A, std::size_t n, const double* w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * dot(A + i * n, w, n);
  return acc;
}

}  // namespace driftbridge::kernels::avx2

#endif  // DRIFTBRIDGE_HAVE_AVX2_BUILD
