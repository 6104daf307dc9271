// Scalar reference implementations of the arithmetic kernels.
#include "driftbridge/kernels.hpp"

#include <limits>

namespace driftbridge::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

MinPlusResult min_plus(const double* a, const double* b, std::size_t n) {
  MinPlusResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < n; ++i) {
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

}  // namespace driftbridge::kernels::scalar
