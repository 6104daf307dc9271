// Pairwise distance computation and dense Cholesky factorization.
#pragma once

#include <span>

#include "driftbridge/types.hpp"

namespace driftbridge {

// Entry (i,j) = Euclidean distance between X_i and Y_j raised to power p.
Matrix pairwise_power_distances(const SampleSet& X, const SampleSet& Y, double p);

// Plain Euclidean distances (p = 1).
Matrix pairwise_distances(const SampleSet& X, const SampleSet& Y);

// Upper-triangular R with R'R = A + jitter*I. Throws DomainError when the
// shifted matrix is not positive definite.
Matrix cholesky_factor(const Matrix& A, double jitter);

// 1e-8 * trace(A)/n; keeps kernel-matrix factorizations stable.
double default_jitter(const Matrix& A);

// Solves (R'R) x = b in place given the upper-triangular factor R.
void cholesky_solve(const Matrix& R, std::span<double> b);

}  // namespace driftbridge
