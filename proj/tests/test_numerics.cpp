#include <doctest.h>

#include <cmath>

#include "driftbridge/numerics.hpp"
#include "oracles.hpp"

using namespace driftbridge;

TEST_SUITE("numerics") {

TEST_CASE("pairwise power distances: stated examples") {
  CHECK(pairwise_power_distances(make_sample_set({{0.0}}), make_sample_set({{0.0}}), 2.0)
            .at(0, 0) == 0.0);

  const Matrix d1 = pairwise_power_distances(make_sample_set({{0.0}, {3.0}}),
                                             make_sample_set({{4.0}}), 1.0);
  CHECK(d1.rows == 2);
  CHECK(d1.cols == 1);
  CHECK(d1.at(0, 0) == doctest::Approx(4.0));
  CHECK(d1.at(1, 0) == doctest::Approx(1.0));

  const Matrix d2 = pairwise_power_distances(make_sample_set({{0.0, 0.0}}),
                                             make_sample_set({{3.0, 4.0}}), 2.0);
  CHECK(d2.at(0, 0) == doctest::Approx(25.0));
}

TEST_CASE("pairwise distances reject mismatched dimensions and bad exponents") {
  const SampleSet x = make_sample_set({{0.0, 1.0}});
  const SampleSet y = make_sample_set({{0.0}});
  CHECK_THROWS_AS(pairwise_power_distances(x, y, 2.0), DimensionError);
  CHECK_THROWS_AS(pairwise_power_distances(x, x, 0.0), DomainError);
}

TEST_CASE("self-distances are symmetric with a zero diagonal") {
  RngStream rng(RngSeed{11}, 0);
  for (double p : {1.0, 2.0, 3.5}) {
    const SampleSet x = oracles::random_sample_set(9, 4, rng);
    const Matrix d = pairwise_power_distances(x, x, p);
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(d.at(i, i) == 0.0);
      for (std::size_t j = 0; j < 9; ++j)
        CHECK(std::abs(d.at(i, j) - d.at(j, i)) < 1e-12);
    }
  }
}

TEST_CASE("cholesky: stated examples") {
  Matrix a(1, 1);
  a.at(0, 0) = 4.0;
  CHECK(cholesky_factor(a, 0.0).at(0, 0) == doctest::Approx(2.0));

  const Matrix eye = Matrix::identity(3);
  const Matrix r = cholesky_factor(eye, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(r.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

  Matrix b(2, 2);
  b.at(0, 0) = 2.0;
  b.at(0, 1) = 1.0;
  b.at(1, 0) = 1.0;
  b.at(1, 1) = 2.0;
  const Matrix rb = cholesky_factor(b, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double recon = 0.0;
      for (std::size_t k = 0; k < 2; ++k) recon += rb.at(k, i) * rb.at(k, j);
      CHECK(recon == doctest::Approx(b.at(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("cholesky reconstructs random SPD matrices to 1e-8 relative") {
  RngStream rng(RngSeed{12}, 0);
  for (std::size_t n : {2u, 5u, 11u, 20u}) {
    const Matrix a = oracles::random_spd(n, rng);
    const Matrix r = cholesky_factor(a, 0.0);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double recon = 0.0;
        for (std::size_t k = 0; k < n; ++k) recon += r.at(k, i) * r.at(k, j);
        err += (recon - a.at(i, j)) * (recon - a.at(i, j));
        norm += a.at(i, j) * a.at(i, j);
      }
    CHECK(std::sqrt(err / norm) < 1e-8);
    // Upper-triangular shape.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(r.at(i, j) == 0.0);
  }
}

TEST_CASE("cholesky rejects indefinite and asymmetric inputs") {
  Matrix notpd(2, 2);
  notpd.at(0, 0) = 1.0;
  notpd.at(0, 1) = 2.0;
  notpd.at(1, 0) = 2.0;
  notpd.at(1, 1) = 1.0;
  CHECK_THROWS_AS(cholesky_factor(notpd, 0.0), DomainError);
  // Large enough jitter rescues it.
  CHECK_NOTHROW(cholesky_factor(notpd, 2.0));

  Matrix asym(2, 2);
  asym.at(0, 1) = 1.0;
  CHECK_THROWS_AS(cholesky_factor(asym, 0.0), DomainError);

  Matrix rect(2, 3);
  CHECK_THROWS_AS(cholesky_factor(rect, 0.0), DimensionError);
}

TEST_CASE("cholesky_solve inverts the normal equations") {
  RngStream rng(RngSeed{13}, 0);
  const std::size_t n = 8;
  const Matrix a = oracles::random_spd(n, rng);
  const Matrix r = cholesky_factor(a, 0.0);
  std::vector<double> x_true(n), b(n, 0.0);
  for (double& v : x_true) v = rng.next_normal();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i] += a.at(i, j) * x_true[j];
  cholesky_solve(r, b);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(b[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
}

TEST_CASE("default jitter tracks the trace") {
  Matrix a = Matrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i) a.at(i, i) = 2.0;
  CHECK(default_jitter(a) == doctest::Approx(2e-8));
}

}  // TEST_SUITE
