// Kernel evaluation and the weighted biased MMD^2 estimator
//   MMD^2 = w'Kx w + v'Ky v - 2 v'Kyx w.
#pragma once

#include <span>
#include <string>

#include "driftbridge/types.hpp"

namespace driftbridge {

enum class KernelFamily { squared_exponential, exponential };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

struct KernelSpec {
  KernelFamily family = KernelFamily::squared_exponential;
  double lengthscale = 1.0;
};

// k(a, b) given the squared Euclidean distance between a and b.
double kernel_value(const KernelSpec& k, double squared_distance);

// Median of the n(n-1)/2 pairwise distances of X; 1 when that median is 0.
double median_lengthscale(const SampleSet& X);

// Entry (i, j) = k(a_i, b_j).
Matrix kernel_matrix(const SampleSet& A, const SampleSet& B, const KernelSpec& k);

struct MmdParts {
  Matrix Kx;   // n x n
  Matrix Ky;   // m x m
  Matrix Kyx;  // m x n
};

MmdParts mmd_parts(const SampleSet& X, const SampleSet& Y, const KernelSpec& k);

double weighted_mmd_sq(const MmdParts& parts, std::span<const double> w,
                       std::span<const double> v);

// Uniform-weight biased estimator.
double mmd_sq(const SampleSet& X, const SampleSet& Y, const KernelSpec& k);

}  // namespace driftbridge
