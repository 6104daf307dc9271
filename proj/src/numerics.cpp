#include "driftbridge/numerics.hpp"

#include <cmath>

#include "driftbridge/kernels.hpp"

namespace driftbridge {

Matrix pairwise_power_distances(const SampleSet& X, const SampleSet& Y, double p) {
  if (X.dim() != Y.dim())
    throw DimensionError("pairwise distances: feature dimensions differ");
  if (!(p > 0.0)) throw DomainError("pairwise distances: exponent must be positive");

  const std::size_t n = X.size(), m = Y.size(), d = X.dim();
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = X.point(i);
    double* row = out.row(i);
    if (p == 2.0) {
      for (std::size_t j = 0; j < m; ++j)
        row[j] = kernels::squared_distance(xi, Y.point(j), d);
    } else if (p == 1.0) {
      for (std::size_t j = 0; j < m; ++j)
        row[j] = std::sqrt(kernels::squared_distance(xi, Y.point(j), d));
    } else {
      const double half_p = 0.5 * p;
      for (std::size_t j = 0; j < m; ++j) {
        const double sq = kernels::squared_distance(xi, Y.point(j), d);
        row[j] = sq > 0.0 ? std::pow(sq, half_p) : 0.0;
      }
    }
  }
  return out;
}

Matrix pairwise_distances(const SampleSet& X, const SampleSet& Y) {
  return pairwise_power_distances(X, Y, 1.0);
}

double default_jitter(const Matrix& A) {
  if (A.rows == 0) return 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) trace += A.at(i, i);
  return 1e-8 * trace / static_cast<double>(A.rows);
}

Matrix cholesky_factor(const Matrix& A, double jitter) {
  const std::size_t n = A.rows;
  if (A.cols != n) throw DimensionError("cholesky: matrix must be square");
  if (jitter < 0.0) throw DomainError("cholesky: jitter must be nonnegative");
  const double scale = [&] {
    double s = 0.0;
    for (double v : A.data) s = std::max(s, std::abs(v));
    return s;
  }();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(A.at(i, j) - A.at(j, i)) > 1e-9 * (1.0 + scale))
        throw DomainError("cholesky: matrix is not symmetric");

  // Build lower factor L row by row (contiguous dots), return R = L'.
  Matrix L(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double s = kernels::dot(L.row(i), L.row(j), j);
      if (i == j) {
        const double pivot = A.at(i, i) + jitter - s;
        if (!(pivot > 0.0) || !std::isfinite(pivot))
          throw DomainError("cholesky: matrix is not positive definite");
        L.at(i, i) = std::sqrt(pivot);
      } else {
        L.at(i, j) = (A.at(i, j) - s) / L.at(j, j);
      }
    }
  }
  Matrix R(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) R.at(j, i) = L.at(i, j);
  return R;
}

void cholesky_solve(const Matrix& R, std::span<double> b) {
  const std::size_t n = R.rows;
  if (b.size() != n) throw DimensionError("cholesky_solve: size mismatch");
  // R'R x = b: forward substitution with R' (lower), then back with R.
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= R.at(k, i) * b[k];
    b[i] = s / R.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= R.at(ii, k) * b[k];
    b[ii] = s / R.at(ii, ii);
  }
}

}  // namespace driftbridge
