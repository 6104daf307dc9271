// Exact discrete optimal transport between weighted point sets, and the
// dummy-point partial Wasserstein construction: unmatched reference mass is
// routed to a far-away dummy column whose cost never interferes with real
// matches, and only the real block contributes to the reported distance.
#pragma once

#include <cstddef>
#include <vector>

#include "driftbridge/types.hpp"

namespace driftbridge {

struct DiscreteMeasure {
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

DiscreteMeasure uniform_measure(std::size_t n);

// Nonnegative entries summing to one (within tol); throws otherwise.
void check_probability(const DiscreteMeasure& mu, double tol = 1e-6);

struct Coupling {
  Matrix matrix;  // n x m, nonnegative
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;
};

// Total transported cost sum_ij C_ij P_ij.
double transport_cost(const Matrix& cost, const Coupling& coupling);

// Exact minimizer of sum C_ij P_ij over couplings of (mu, nu).
// The returned coupling's marginals are verified to 1e-8.
Coupling solve_discrete_ot(const Matrix& cost, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu);

struct PartialProblem {
  Matrix cost;  // N x (M+1); last column is the dummy at D^p
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  double dummy_distance;  // D
};

// Augmented cost and measures of the partial match: reference mass is
// uniform, alpha spreads uniformly over the test points, and 1-alpha sits on
// a dummy point at distance D = multiplier * max_ij |X_i - Y_j| (D = 1 when
// all distances vanish).
PartialProblem build_partial_problem(const SampleSet& X, const SampleSet& Y,
                                     double alpha, double p,
                                     double dummy_multiplier = 1.1);

struct PartialOtResult {
  double distance = 0.0;       // W_p^alpha(X, Y)
  double transported_cost = 0.0;  // sum over the real block of C_ij P_ij
  Coupling coupling;           // N x M real block
  std::vector<double> dummy_column;
  double alpha = 1.0;
  double p = 2.0;
  double dummy_distance = 0.0;
  Matrix cost;  // N x M real-block costs, kept for attribution
};

PartialOtResult partial_wasserstein(const SampleSet& X, const SampleSet& Y,
                                    double alpha, double p,
                                    double dummy_multiplier = 1.1);

// Full Wasserstein distance with uniform weights; no dummy column.
double wasserstein_distance(const SampleSet& X, const SampleSet& Y, double p);

}  // namespace driftbridge
