// Seeded randomness. One global seed fans out to independent per-task
// streams through a counter-based splitmix64 mix, so bootstrap permutations
// and the ad-hoc optimizer stay reproducible no matter how work is scheduled.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace driftbridge {

struct RngSeed {
  std::uint64_t value = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic stream addressed by (seed, stream id). Raw 64-bit output
// comes from mt19937_64; derived draws avoid std::*_distribution so the
// byte stream does not depend on the standard library implementation.
class RngStream {
 public:
  RngStream(RngSeed seed, std::uint64_t stream)
      : gen_(detail::splitmix64(detail::splitmix64(seed.value) ^
                                detail::splitmix64(stream + 0x5851F42D4C957F2Dull))) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1); never returns an exact endpoint.
  double next_open_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased uniform index in [0, n).
  std::size_t next_index(std::size_t n) {
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = un ? (~std::uint64_t{0} / un) * un : 0;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (limit == 0 || x < limit) return static_cast<std::size_t>(x % un);
    }
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = next_open_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  // Writes a random size-k prefix of a permutation of [0, n) into out.
  void sample_prefix(std::size_t n, std::size_t k, std::vector<std::size_t>& out) {
    scratch_.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = i;
    out.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + next_index(n - i);
      std::swap(scratch_[i], scratch_[j]);
      out[i] = scratch_[i];
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
  std::vector<std::size_t> scratch_;
};

}  // namespace driftbridge
