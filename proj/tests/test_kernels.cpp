#include <doctest.h>

#include <cmath>
#include <vector>

#include "driftbridge/kernels.hpp"
#include "driftbridge/rng.hpp"

using namespace driftbridge;

namespace {

#if DRIFTBRIDGE_HAVE_AVX2_BUILD
bool avx2_runnable() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

std::vector<double> random_vec(std::size_t n, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.next_normal();
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference values") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(kernels::scalar::dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(kernels::scalar::sum(a, 3) == doctest::Approx(6.0));
  CHECK(kernels::scalar::squared_distance(a, b, 3) == doctest::Approx(9.0 + 49.0 + 9.0));
  const auto r = kernels::scalar::min_plus(a, b, 3);
  CHECK(r.value == doctest::Approx(-3.0));
  CHECK(r.index == 1);
}

TEST_CASE("min_plus breaks ties toward the lowest index") {
  const std::vector<double> a(13, 1.0), b(13, 2.0);
  for (std::size_t n = 1; n <= 13; ++n) {
    const auto r = kernels::min_plus(a.data(), b.data(), n);
    CHECK(r.value == 3.0);
    CHECK(r.index == 0);
  }
}

#if DRIFTBRIDGE_HAVE_AVX2_BUILD
TEST_CASE("avx2 variants match the scalar reference") {
  if (!avx2_runnable()) return;
  RngStream rng(RngSeed{20240811}, 0);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 100u, 1001u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);

    CHECK(kernels::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::sum(a.data(), n) ==
          doctest::Approx(kernels::scalar::sum(a.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::squared_distance(a.data(), b.data(), n))
              .epsilon(1e-12));

    // Single adds per lane: values agree bitwise, tie handling included.
    const auto rs = kernels::scalar::min_plus(a.data(), b.data(), n);
    const auto rv = kernels::avx2::min_plus(a.data(), b.data(), n);
    CHECK(rs.value == rv.value);
    CHECK(rs.index == rv.index);

    auto ys = a;
    auto yv = a;
    kernels::scalar::axpy(0.37, b.data(), ys.data(), n);
    kernels::avx2::axpy(0.37, b.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-13));
  }
}

TEST_CASE("avx2 min_plus prefers the lowest index across lanes") {
  if (!avx2_runnable()) return;
  // Identical minima at indices 2 and 6 land in different SIMD lanes.
  std::vector<double> a(11, 5.0), b(11, 0.0);
  a[2] = -1.0;
  a[6] = -1.0;
  const auto r = kernels::avx2::min_plus(a.data(), b.data(), 11);
  CHECK(r.value == -1.0);
  CHECK(r.index == 2);
}

TEST_CASE("avx2 matvec and quadratic form match scalar") {
  if (!avx2_runnable()) return;
  RngStream rng(RngSeed{7}, 1);
  const std::size_t rows = 9, cols = 13;
  const auto A = random_vec(rows * cols, rng);
  const auto x = random_vec(cols, rng);
  std::vector<double> ys(rows), yv(rows);
  kernels::scalar::matvec(A.data(), rows, cols, x.data(), ys.data());
  kernels::avx2::matvec(A.data(), rows, cols, x.data(), yv.data());
  for (std::size_t i = 0; i < rows; ++i)
    CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-12));

  const auto S = random_vec(cols * cols, rng);
  const auto w = random_vec(cols, rng);
  CHECK(kernels::avx2::quadratic_form(S.data(), cols, w.data()) ==
        doctest::Approx(kernels::scalar::quadratic_form(S.data(), cols, w.data()))
            .epsilon(1e-12));
}
#endif

TEST_CASE("dispatch is callable and consistent with itself") {
  RngStream rng(RngSeed{3}, 2);
  const auto a = random_vec(37, rng);
  const auto b = random_vec(37, rng);
  const double once = kernels::dot(a.data(), b.data(), 37);
  const double twice = kernels::dot(a.data(), b.data(), 37);
  CHECK(once == twice);
  CHECK(kernels::isa_name(kernels::active_isa()) != nullptr);
}

}  // TEST_SUITE
