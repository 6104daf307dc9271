#include "driftbridge/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "driftbridge/kernels.hpp"

namespace driftbridge {

std::string to_string(KernelFamily family) {
  return family == KernelFamily::squared_exponential ? "squared-exponential"
                                                     : "exponential";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "squared-exponential") return KernelFamily::squared_exponential;
  if (name == "exponential") return KernelFamily::exponential;
  throw DomainError("unknown kernel family: " + name);
}

double kernel_value(const KernelSpec& k, double squared_distance) {
  if (!(k.lengthscale > 0.0)) throw DomainError("kernel lengthscale must be positive");
  if (k.family == KernelFamily::squared_exponential)
    return std::exp(-squared_distance / (2.0 * k.lengthscale * k.lengthscale));
  return std::exp(-std::sqrt(squared_distance) / k.lengthscale);
}

double median_lengthscale(const SampleSet& X) {
  const std::size_t n = X.size();
  if (n < 2) throw DomainError("median lengthscale needs at least two points");
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist.push_back(std::sqrt(kernels::squared_distance(X.point(i), X.point(j), X.dim())));
  const std::size_t k = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + k, dist.end());
  double median = dist[k];
  if (dist.size() % 2 == 0) {
    const double lower = *std::max_element(dist.begin(), dist.begin() + k);
    median = 0.5 * (lower + median);
  }
  return median > 0.0 ? median : 1.0;
}

Matrix kernel_matrix(const SampleSet& A, const SampleSet& B, const KernelSpec& k) {
  if (A.dim() != B.dim())
    throw DimensionError("kernel matrix: feature dimensions differ");
  if (!(k.lengthscale > 0.0)) throw DomainError("kernel lengthscale must be positive");

  const std::size_t n = A.size(), m = B.size(), d = A.dim();
  Matrix out(n, m);
  if (k.family == KernelFamily::squared_exponential) {
    const double inv = -1.0 / (2.0 * k.lengthscale * k.lengthscale);
    for (std::size_t i = 0; i < n; ++i) {
      const double* ai = A.point(i);
      double* row = out.row(i);
      for (std::size_t j = 0; j < m; ++j)
        row[j] = std::exp(inv * kernels::squared_distance(ai, B.point(j), d));
    }
  } else {
    const double inv = -1.0 / k.lengthscale;
    for (std::size_t i = 0; i < n; ++i) {
      const double* ai = A.point(i);
      double* row = out.row(i);
      for (std::size_t j = 0; j < m; ++j)
        row[j] = std::exp(inv * std::sqrt(kernels::squared_distance(ai, B.point(j), d)));
    }
  }
  return out;
}

MmdParts mmd_parts(const SampleSet& X, const SampleSet& Y, const KernelSpec& k) {
  return MmdParts{kernel_matrix(X, X, k), kernel_matrix(Y, Y, k),
                  kernel_matrix(Y, X, k)};
}

double weighted_mmd_sq(const MmdParts& parts, std::span<const double> w,
                       std::span<const double> v) {
  const std::size_t n = parts.Kx.rows, m = parts.Ky.rows;
  if (w.size() != n || v.size() != m)
    throw DimensionError("weighted mmd: weight lengths do not match the kernel matrices");
  if (parts.Kyx.rows != m || parts.Kyx.cols != n)
    throw DimensionError("weighted mmd: cross-kernel has the wrong shape");
  const double sw = kernels::sum(w.data(), n);
  const double sv = kernels::sum(v.data(), m);
  if (std::abs(sw - 1.0) > 1e-6 || std::abs(sv - 1.0) > 1e-6)
    throw DomainError("weighted mmd: weights must sum to one");

  std::vector<double> kyx_w(m);
  kernels::matvec(parts.Kyx.data.data(), m, n, w.data(), kyx_w.data());
  return kernels::quadratic_form(parts.Kx.data.data(), n, w.data()) +
         kernels::quadratic_form(parts.Ky.data.data(), m, v.data()) -
         2.0 * kernels::dot(v.data(), kyx_w.data(), m);
}

double mmd_sq(const SampleSet& X, const SampleSet& Y, const KernelSpec& k) {
  const MmdParts parts = mmd_parts(X, Y, k);
  const std::vector<double> w(X.size(), 1.0 / static_cast<double>(X.size()));
  const std::vector<double> v(Y.size(), 1.0 / static_cast<double>(Y.size()));
  return weighted_mmd_sq(parts, w, v);
}

}  // namespace driftbridge
