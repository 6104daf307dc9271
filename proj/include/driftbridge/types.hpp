// Core value types shared by every module: dense row-major matrices,
// feature sample sets, and the library error hierarchy.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftbridge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or length mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its admissible range (alpha, exponent, severity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Problem has no feasible solution (weight mismatch, degenerate null).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// File and serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Iterative solver ran out of budget; carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double best_value,
                   std::vector<double> best_point)
      : Error(msg), best_value(best_value), best_point(std::move(best_point)) {}
  double best_value;
  std::vector<double> best_point;
};

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline void check_finite(const Matrix& m, const char* what) {
  for (double v : m.data) {
    if (!std::isfinite(v))
      throw DomainError(std::string(what) + ": non-finite entry");
  }
}

// A set of n d-dimensional feature vectors, one per matrix row.
struct SampleSet {
  Matrix points;  // n x d

  std::size_t size() const { return points.rows; }
  std::size_t dim() const { return points.cols; }
  const double* point(std::size_t i) const { return points.row(i); }
};

inline SampleSet make_sample_set(Matrix points) {
  if (points.rows < 1 || points.cols < 1)
    throw DimensionError("sample set must have n >= 1 and d >= 1");
  check_finite(points, "sample set");
  return SampleSet{std::move(points)};
}

// Convenience for tests and small literals: one row per sample.
inline SampleSet make_sample_set(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = n ? rows.begin()->size() : 0;
  Matrix m(n, d);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != d) throw DimensionError("ragged sample literal");
    std::size_t j = 0;
    for (double v : r) m.at(i, j++) = v;
    ++i;
  }
  return make_sample_set(std::move(m));
}

}  // namespace driftbridge
