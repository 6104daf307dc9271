#include <doctest.h>

#include <cmath>

#include "driftbridge/partial_mmd.hpp"
#include "oracles.hpp"

using namespace driftbridge;

namespace {

const KernelSpec kSqExp{KernelFamily::squared_exponential, 1.0};

// Grid-search oracle value for X = {0, 1, 4}, Y = {0.5}, alpha = 2/3,
// squared-exponential lengthscale 1, computed over the feasible simplex
// slice at step 1e-3 before the solvers were built.
constexpr double kGridInstanceValue = 0.038271524687126;

MmdParts grid_instance_parts() {
  return mmd_parts(make_sample_set({{0.0}, {1.0}, {4.0}}),
                   make_sample_set({{0.5}}), kSqExp);
}

void check_feasible(const BoxSimplexWeights& weights, bool enforce_cap) {
  double total = 0.0;
  for (double w : weights.w) {
    CHECK(w >= -1e-12);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  if (enforce_cap) CHECK(weights.max_cap_violation() <= 1e-8);
}

}  // namespace

TEST_SUITE("partial_mmd") {

TEST_CASE("projection onto the box-capped simplex") {
  {
    // Loose cap: classic simplex projection.
    const std::vector<double> w = project_box_simplex({0.8, 0.4, 0.2}, 1.0);
    double total = 0.0;
    for (double v : w) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : w) CHECK(v >= 0.0);
  }
  {
    // Tight cap forces the uniform point.
    const std::vector<double> w = project_box_simplex({5.0, -2.0, 0.1, 0.0}, 0.25);
    for (double v : w) CHECK(v == doctest::Approx(0.25).epsilon(1e-10));
  }
  {
    // A feasible point projects to itself.
    const std::vector<double> y{0.5, 0.3, 0.2};
    const std::vector<double> w = project_box_simplex(y, 0.6);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(w[i] == doctest::Approx(y[i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(project_box_simplex({0.5, 0.5}, 0.4), DomainError);
}

TEST_CASE("qp: alpha = 1 returns the uniform mmd exactly") {
  RngStream rng(RngSeed{301}, 0);
  const SampleSet x = oracles::random_sample_set(6, 2, rng);
  const SampleSet y = oracles::random_sample_set(4, 2, rng);
  const MmdParts parts = mmd_parts(x, y, kSqExp);
  const PartialMmdResult r = partial_mmd_qp(parts, 1.0);
  const std::vector<double> w(6, 1.0 / 6.0), v(4, 0.25);
  CHECK(r.value == weighted_mmd_sq(parts, w, v));
  for (double wi : r.weights.w) CHECK(wi == 1.0 / 6.0);
}

TEST_CASE("qp: subset instance concentrates weight and reaches zero") {
  const MmdParts parts =
      mmd_parts(make_sample_set({{0.0}, {5.0}}), make_sample_set({{0.0}}), kSqExp);
  const PartialMmdResult r = partial_mmd_qp(parts, 0.5);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(r.weights.w[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.weights.w[1] == doctest::Approx(0.0).epsilon(1e-6));
  check_feasible(r.weights, true);
}

TEST_CASE("qp matches the frozen grid-search oracle") {
  const PartialMmdResult r = partial_mmd_qp(grid_instance_parts(), 2.0 / 3.0);
  CHECK(r.value == doctest::Approx(kGridInstanceValue).epsilon(1e-7));
  CHECK(std::abs(r.value - kGridInstanceValue) < 1e-5);
  // Optimal weights cap the two near points and drop the far one.
  CHECK(r.weights.w[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.weights.w[1] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.weights.w[2] == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("adhoc: alpha = 1 stays uniform") {
  RngStream rng(RngSeed{302}, 0);
  const SampleSet x = oracles::random_sample_set(5, 2, rng);
  const SampleSet y = oracles::random_sample_set(3, 2, rng);
  const MmdParts parts = mmd_parts(x, y, kSqExp);
  const PartialMmdResult r = partial_mmd_adhoc(parts, 1.0, 50, RngSeed{1});
  const std::vector<double> w(5, 0.2), v(3, 1.0 / 3.0);
  CHECK(r.value == weighted_mmd_sq(parts, w, v));
}

TEST_CASE("adhoc: subset instance reaches zero") {
  const MmdParts parts =
      mmd_parts(make_sample_set({{0.0}, {5.0}}), make_sample_set({{0.0}}), kSqExp);
  const PartialMmdResult r = partial_mmd_adhoc(parts, 0.5, 50, RngSeed{7});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("adhoc tracks the qp value on the grid instance") {
  const PartialMmdResult qp = partial_mmd_qp(grid_instance_parts(), 2.0 / 3.0);
  const PartialMmdResult ad =
      partial_mmd_adhoc(grid_instance_parts(), 2.0 / 3.0, 50, RngSeed{11});
  CHECK(std::abs(ad.value - qp.value) < 1e-4);
}

TEST_CASE("adhoc objective trace is monotone non-increasing") {
  RngStream rng(RngSeed{303}, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const SampleSet x = oracles::random_sample_set(4 + rng.next_index(8), 2, rng);
    const SampleSet y = oracles::random_sample_set(2 + rng.next_index(5), 2, rng);
    const PartialMmdResult r = partial_mmd_adhoc(
        mmd_parts(x, y, kSqExp), 0.3 + 0.5 * rng.next_double(), 30, RngSeed{trial});
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1]);
    check_feasible(r.weights, false);  // renormalization may exceed the cap
  }
}

TEST_CASE("two-stage: identity and subset instances") {
  RngStream rng(RngSeed{304}, 0);
  {
    const SampleSet x = oracles::random_sample_set(5, 2, rng);
    const PartialMmdResult r = partial_mmd_two_stage(x, x, 1.0, 2.0, kSqExp);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
    for (double w : r.weights.w) CHECK(w == doctest::Approx(0.2).epsilon(1e-9));
  }
  {
    const PartialMmdResult r = partial_mmd_two_stage(
        make_sample_set({{0.0}, {5.0}}), make_sample_set({{0.0}}), 0.5, 2.0, kSqExp);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.weights.w[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.weights.w[1] == doctest::Approx(0.0).epsilon(1e-9));
    check_feasible(r.weights, true);
  }
}

TEST_CASE("two-stage value equals the dense weighted form") {
  RngStream rng(RngSeed{305}, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.next_index(10);
    const std::size_t m = 2 + rng.next_index(6);
    const SampleSet x = oracles::random_sample_set(n, 3, rng);
    const SampleSet y = oracles::random_sample_set(m, 3, rng);
    const double alpha = 0.3 + 0.6 * rng.next_double();
    const PartialMmdResult r = partial_mmd_two_stage(x, y, alpha, 2.0, kSqExp);
    const MmdParts parts = mmd_parts(x, y, kSqExp);
    const std::vector<double> v(m, 1.0 / static_cast<double>(m));
    CHECK(r.value ==
          doctest::Approx(weighted_mmd_sq(parts, r.weights.w, v)).epsilon(1e-12));
  }
}

TEST_CASE("ordering: two-stage and adhoc upper-bound the qp minimum") {
  RngStream rng(RngSeed{306}, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.next_index(10);  // n <= 12
    const std::size_t m = 1 + rng.next_index(6);   // m <= 6
    const SampleSet x = oracles::random_sample_set(n, 2, rng);
    const SampleSet y = oracles::random_sample_set(m, 2, rng);
    const double alpha = 0.25 + 0.7 * rng.next_double();
    const MmdParts parts = mmd_parts(x, y, kSqExp);

    const PartialMmdResult qp = partial_mmd_qp(parts, alpha);
    const PartialMmdResult two =
        partial_mmd_two_stage(x, y, alpha, 2.0, kSqExp);
    const PartialMmdResult ad =
        partial_mmd_adhoc(parts, alpha, 50, RngSeed{1000 + trial});

    CHECK(two.value >= qp.value - 1e-8);
    CHECK(ad.value >= qp.value - 1e-8);
    CHECK(std::abs(ad.value - qp.value) < 1e-3);

    // Anti-concentration: the constrained minimum cannot exceed the uniform
    // objective.
    const double uniform = mmd_sq(x, y, kSqExp);
    CHECK(qp.value <= uniform + 1e-9);
    CHECK(two.value <= uniform + 1e-9);

    check_feasible(qp.weights, true);
    check_feasible(two.weights, true);
    check_feasible(ad.weights, false);
  }
}

TEST_CASE("alpha collapse: all three methods equal mmd_sq at alpha = 1") {
  RngStream rng(RngSeed{307}, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const SampleSet x = oracles::random_sample_set(3 + rng.next_index(8), 2, rng);
    const SampleSet y = oracles::random_sample_set(2 + rng.next_index(5), 2, rng);
    const MmdParts parts = mmd_parts(x, y, kSqExp);
    const double uniform = mmd_sq(x, y, kSqExp);
    CHECK(std::abs(partial_mmd_qp(parts, 1.0).value - uniform) < 1e-9);
    CHECK(std::abs(partial_mmd_adhoc(parts, 1.0, 50, RngSeed{2}).value - uniform) <
          1e-9);
    CHECK(std::abs(partial_mmd_two_stage(x, y, 1.0, 2.0, kSqExp).value - uniform) <
          1e-9);
  }
}

TEST_CASE("alpha outside (0, 1] is rejected") {
  const MmdParts parts = grid_instance_parts();
  CHECK_THROWS_AS(partial_mmd_qp(parts, 0.0), DomainError);
  CHECK_THROWS_AS(partial_mmd_adhoc(parts, 1.2, 10, RngSeed{0}), DomainError);
}

TEST_CASE("adhoc is deterministic per seed") {
  const MmdParts parts = grid_instance_parts();
  const PartialMmdResult a = partial_mmd_adhoc(parts, 0.5, 30, RngSeed{42});
  const PartialMmdResult b = partial_mmd_adhoc(parts, 0.5, 30, RngSeed{42});
  CHECK(a.value == b.value);
  for (std::size_t i = 0; i < a.weights.w.size(); ++i)
    CHECK(a.weights.w[i] == b.weights.w[i]);
}

}  // TEST_SUITE
