#include "driftbridge/ot.hpp"

#include <algorithm>
#include <cmath>

#include "driftbridge/kernels.hpp"
#include "driftbridge/network_simplex.hpp"
#include "driftbridge/numerics.hpp"

namespace driftbridge {

DiscreteMeasure uniform_measure(std::size_t n) {
  if (n == 0) throw DimensionError("uniform measure over zero points");
  return DiscreteMeasure{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void check_probability(const DiscreteMeasure& mu, double tol) {
  double total = 0.0;
  for (double w : mu.weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InfeasibleError("measure has a negative or non-finite weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol)
    throw InfeasibleError("measure weights do not sum to one");
}

double transport_cost(const Matrix& cost, const Coupling& coupling) {
  if (cost.rows != coupling.matrix.rows || cost.cols != coupling.matrix.cols)
    throw DimensionError("transport_cost: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < cost.rows; ++i)
    total += kernels::dot(cost.row(i), coupling.matrix.row(i), cost.cols);
  return total;
}

namespace {

void verify_marginals(const Coupling& c) {
  const std::size_t n = c.matrix.rows, m = c.matrix.cols;
  std::vector<double> col_sum(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = c.matrix.row(i);
    const double rs = kernels::sum(row, m);
    if (std::abs(rs - c.row_marginal[i]) > 1e-8)
      throw Error("coupling violates its row marginal");
    for (std::size_t j = 0; j < m; ++j) col_sum[j] += row[j];
  }
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(col_sum[j] - c.col_marginal[j]) > 1e-8)
      throw Error("coupling violates its column marginal");
}

}  // namespace

Coupling solve_discrete_ot(const Matrix& cost, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu) {
  if (mu.size() != cost.rows || nu.size() != cost.cols)
    throw DimensionError("solve_discrete_ot: weight lengths do not match the cost matrix");
  check_probability(mu);
  check_probability(nu);

  TransportSimplex solver(cost, mu.weights, nu.weights);
  solver.solve();

  Coupling result{solver.extract_flow(), mu.weights, nu.weights};
  verify_marginals(result);
  return result;
}

PartialProblem build_partial_problem(const SampleSet& X, const SampleSet& Y,
                                     double alpha, double p,
                                     double dummy_multiplier) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw DomainError("partial problem: alpha must lie in (0, 1]");
  if (!(p > 0.0)) throw DomainError("partial problem: exponent must be positive");
  if (!(dummy_multiplier > 0.0))
    throw DomainError("partial problem: dummy multiplier must be positive");

  const std::size_t n = X.size(), m = Y.size();
  const Matrix block = pairwise_power_distances(X, Y, p);

  double max_power = 0.0;
  for (double v : block.data) max_power = std::max(max_power, v);
  // Costs hold distance^p, so the max distance is the p-th root.
  double dummy_distance = dummy_multiplier * std::pow(max_power, 1.0 / p);
  if (!(dummy_distance > 0.0)) dummy_distance = 1.0;  // all points coincide
  const double dummy_cost = std::pow(dummy_distance, p);

  Matrix cost(n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(block.row(i), block.row(i) + m, cost.row(i));
    cost.at(i, m) = dummy_cost;
  }

  DiscreteMeasure nu;
  nu.weights.assign(m + 1, alpha / static_cast<double>(m));
  nu.weights[m] = 1.0 - alpha;

  return PartialProblem{std::move(cost), uniform_measure(n), std::move(nu),
                        dummy_distance};
}

PartialOtResult partial_wasserstein(const SampleSet& X, const SampleSet& Y,
                                    double alpha, double p,
                                    double dummy_multiplier) {
  PartialProblem problem = build_partial_problem(X, Y, alpha, p, dummy_multiplier);
  const Coupling full = solve_discrete_ot(problem.cost, problem.mu, problem.nu);

  const std::size_t n = X.size(), m = Y.size();
  PartialOtResult result;
  result.alpha = alpha;
  result.p = p;
  result.dummy_distance = problem.dummy_distance;
  result.dummy_column.resize(n);
  result.cost = Matrix(n, m);
  result.coupling.matrix = Matrix(n, m);
  result.coupling.col_marginal.assign(m, alpha / static_cast<double>(m));
  result.coupling.row_marginal.resize(n);

  double transported = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(problem.cost.row(i), problem.cost.row(i) + m, result.cost.row(i));
    std::copy(full.matrix.row(i), full.matrix.row(i) + m, result.coupling.matrix.row(i));
    result.dummy_column[i] = full.matrix.at(i, m);
    result.coupling.row_marginal[i] = kernels::sum(result.coupling.matrix.row(i), m);
    transported += kernels::dot(result.cost.row(i), result.coupling.matrix.row(i), m);
  }
  result.transported_cost = transported;
  result.distance = std::pow(std::max(transported, 0.0) / alpha, 1.0 / p);
  return result;
}

double wasserstein_distance(const SampleSet& X, const SampleSet& Y, double p) {
  if (!(p > 0.0)) throw DomainError("wasserstein: exponent must be positive");
  const Matrix cost = pairwise_power_distances(X, Y, p);
  const Coupling coupling =
      solve_discrete_ot(cost, uniform_measure(X.size()), uniform_measure(Y.size()));
  return std::pow(std::max(transport_cost(cost, coupling), 0.0), 1.0 / p);
}

}  // namespace driftbridge
