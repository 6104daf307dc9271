#include <doctest.h>

#include <cmath>

#include "driftbridge/kernels.hpp"
#include "driftbridge/ot.hpp"
#include "oracles.hpp"

using namespace driftbridge;

namespace {

void check_marginals(const Coupling& c) {
  std::vector<double> col(c.matrix.cols, 0.0);
  for (std::size_t i = 0; i < c.matrix.rows; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < c.matrix.cols; ++j) {
      CHECK(c.matrix.at(i, j) >= 0.0);
      row_sum += c.matrix.at(i, j);
      col[j] += c.matrix.at(i, j);
    }
    CHECK(std::abs(row_sum - c.row_marginal[i]) < 1e-8);
  }
  for (std::size_t j = 0; j < c.matrix.cols; ++j)
    CHECK(std::abs(col[j] - c.col_marginal[j]) < 1e-8);
}

Matrix random_cost(std::size_t n, std::size_t m, RngStream& rng) {
  Matrix c(n, m);
  for (double& v : c.data) v = std::abs(rng.next_normal()) + 0.01 * rng.next_double();
  return c;
}

}  // namespace

TEST_SUITE("ot") {

TEST_CASE("solver: stated examples") {
  {
    Matrix cost(1, 1, 0.0);
    const Coupling c = solve_discrete_ot(cost, uniform_measure(1), uniform_measure(1));
    CHECK(c.matrix.at(0, 0) == doctest::Approx(1.0));
    CHECK(transport_cost(cost, c) == doctest::Approx(0.0));
  }
  {
    Matrix cost(2, 2);
    cost.at(0, 0) = 0.0; cost.at(0, 1) = 1.0;
    cost.at(1, 0) = 1.0; cost.at(1, 1) = 0.0;
    const Coupling c = solve_discrete_ot(cost, uniform_measure(2), uniform_measure(2));
    CHECK(transport_cost(cost, c) == 0.0);
    CHECK(c.matrix.at(0, 0) == doctest::Approx(0.5));
    CHECK(c.matrix.at(1, 1) == doctest::Approx(0.5));
  }
  {
    // Vertex-enumeration oracle gives objective 1.3 at P = [[.4,.3],[0,.3]].
    Matrix cost(2, 2);
    cost.at(0, 0) = 1.0; cost.at(0, 1) = 2.0;
    cost.at(1, 0) = 3.0; cost.at(1, 1) = 1.0;
    const DiscreteMeasure mu{{0.7, 0.3}};
    const DiscreteMeasure nu{{0.4, 0.6}};
    const Coupling c = solve_discrete_ot(cost, mu, nu);
    CHECK(transport_cost(cost, c) == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(c.matrix.at(0, 0) == doctest::Approx(0.4));
    CHECK(c.matrix.at(0, 1) == doctest::Approx(0.3));
    CHECK(c.matrix.at(1, 0) == doctest::Approx(0.0));
    CHECK(c.matrix.at(1, 1) == doctest::Approx(0.3));
    check_marginals(c);
  }
}

TEST_CASE("solver rejects infeasible weights") {
  Matrix cost(2, 2, 1.0);
  const DiscreteMeasure bad{{0.5, 0.4}};
  CHECK_THROWS_AS(solve_discrete_ot(cost, bad, uniform_measure(2)), InfeasibleError);
  const DiscreteMeasure negative{{1.5, -0.5}};
  CHECK_THROWS_AS(solve_discrete_ot(cost, negative, uniform_measure(2)),
                  InfeasibleError);
}

TEST_CASE("solver matches brute-force assignment on random instances") {
  RngStream rng(RngSeed{101}, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.next_index(6);  // n = m in [2, 7]
    const Matrix cost = random_cost(n, n, rng);
    const Coupling c = solve_discrete_ot(cost, uniform_measure(n), uniform_measure(n));
    check_marginals(c);
    CHECK(transport_cost(cost, c) ==
          doctest::Approx(oracles::assignment_minimum(cost)).epsilon(1e-11));
  }
}

TEST_CASE("rectangular instances conserve marginals") {
  RngStream rng(RngSeed{102}, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.next_index(12);
    const std::size_t m = 1 + rng.next_index(12);
    const Matrix cost = random_cost(n, m, rng);
    // Random positive weights normalized to one.
    DiscreteMeasure mu, nu;
    mu.weights.resize(n);
    nu.weights.resize(m);
    double su = 0.0, sv = 0.0;
    for (double& w : mu.weights) su += (w = 0.05 + rng.next_double());
    for (double& w : nu.weights) sv += (w = 0.05 + rng.next_double());
    for (double& w : mu.weights) w /= su;
    for (double& w : nu.weights) w /= sv;
    check_marginals(solve_discrete_ot(cost, mu, nu));
  }
}

TEST_CASE("build_partial_problem: stated examples") {
  {
    const PartialProblem pp = build_partial_problem(
        make_sample_set({{0.0}, {2.0}}), make_sample_set({{1.0}}), 1.0, 1.0);
    CHECK(pp.cost.rows == 2);
    CHECK(pp.cost.cols == 2);
    CHECK(pp.cost.at(0, 0) == doctest::Approx(1.0));
    CHECK(pp.cost.at(1, 0) == doctest::Approx(1.0));
    CHECK(pp.cost.at(0, 1) == doctest::Approx(1.1));
    CHECK(pp.cost.at(1, 1) == doctest::Approx(1.1));
    CHECK(pp.nu.weights[0] == doctest::Approx(1.0));
    CHECK(pp.nu.weights[1] == doctest::Approx(0.0));
  }
  {
    // Degenerate: all distances zero falls back to D = 1.
    const PartialProblem pp = build_partial_problem(
        make_sample_set({{0.0}}), make_sample_set({{0.0}}), 1.0, 2.0);
    CHECK(pp.dummy_distance == doctest::Approx(1.0));
    CHECK(pp.cost.at(0, 1) == doctest::Approx(1.0));
  }
  {
    const PartialProblem pp = build_partial_problem(
        make_sample_set({{0.0}, {10.0}}), make_sample_set({{1.0}}), 0.5, 1.0);
    CHECK(pp.dummy_distance == doctest::Approx(9.9));
    CHECK(pp.nu.weights[0] == doctest::Approx(0.5));
    CHECK(pp.nu.weights[1] == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(build_partial_problem(make_sample_set({{0.0}}),
                                        make_sample_set({{1.0}}), 1.5, 1.0),
                  DomainError);
  CHECK_THROWS_AS(build_partial_problem(make_sample_set({{0.0}}),
                                        make_sample_set({{1.0}}), 0.0, 1.0),
                  DomainError);
}

TEST_CASE("partial wasserstein: stated examples") {
  RngStream rng(RngSeed{103}, 0);
  {
    const SampleSet x = oracles::random_sample_set(6, 3, rng);
    const PartialOtResult r = partial_wasserstein(x, x, 1.0, 2.0);
    CHECK(r.distance == 0.0);
  }
  {
    // Half the mass matches the closest point at distance 1.
    const PartialOtResult r = partial_wasserstein(
        make_sample_set({{0.0}, {10.0}}), make_sample_set({{1.0}}), 0.5, 1.0);
    CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));
    double dummy_mass = 0.0;
    for (double v : r.dummy_column) dummy_mass += v;
    CHECK(dummy_mass == doctest::Approx(0.5).epsilon(1e-9));
  }
  {
    // Points 0 and 2 match exactly; the middle point goes to the dummy.
    const PartialOtResult r =
        partial_wasserstein(make_sample_set({{0.0}, {1.0}, {2.0}}),
                            make_sample_set({{0.0}, {2.0}}), 2.0 / 3.0, 1.0);
    CHECK(r.distance == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.dummy_column[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("alpha = 1 reduces to the full Wasserstein distance") {
  RngStream rng(RngSeed{104}, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.next_index(19);
    const std::size_t m = 2 + rng.next_index(19);
    const std::size_t d = 1 + rng.next_index(5);
    const double p = (trial % 2) ? 1.0 : 2.0;
    const SampleSet x = oracles::random_sample_set(n, d, rng);
    const SampleSet y = oracles::random_sample_set(m, d, rng);
    const double full = wasserstein_distance(x, y, p);
    const double partial = partial_wasserstein(x, y, 1.0, p).distance;
    CHECK(std::abs(full - partial) < 1e-9);
  }
}

TEST_CASE("outlier limit: alpha = 1/N with M = 1 gives the nearest distance") {
  RngStream rng(RngSeed{105}, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.next_index(15);
    const std::size_t d = (trial % 2) ? 1 : 5;
    const SampleSet x = oracles::random_sample_set(n, d, rng);
    const SampleSet y = oracles::random_sample_set(1, d, rng);
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      nearest = std::min(nearest, std::sqrt(kernels::squared_distance(
                                      x.point(i), y.point(0), d)));
    const double dist =
        partial_wasserstein(x, y, 1.0 / static_cast<double>(n), 2.0).distance;
    CHECK(std::abs(dist - nearest) < 1e-9);
  }
}

TEST_CASE("transported cost is monotone in alpha") {
  RngStream rng(RngSeed{106}, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.next_index(10);
    const std::size_t m = 2 + rng.next_index(6);
    const SampleSet x = oracles::random_sample_set(n, 3, rng);
    const SampleSet y = oracles::random_sample_set(m, 3, rng);
    const double a1 = 0.2 + 0.3 * rng.next_double();
    const double a2 = a1 + (1.0 - a1) * rng.next_double();
    const double c1 = partial_wasserstein(x, y, a1, 2.0).transported_cost;
    const double c2 = partial_wasserstein(x, y, a2, 2.0).transported_cost;
    CHECK(c2 >= c1 - 1e-10);
  }
}

TEST_CASE("dummy multiplier is configurable") {
  const PartialProblem pp = build_partial_problem(
      make_sample_set({{0.0}}), make_sample_set({{2.0}}), 0.5, 1.0, 3.0);
  CHECK(pp.dummy_distance == doctest::Approx(6.0));
}

}  // TEST_SUITE
