// Alpha-partial MMD: minimize the weighted MMD^2 quadratic form over
// reference weights in the box-capped simplex
//
//   { w : 0 <= w_i <= 1/(alpha n), sum_i w_i = 1 }.
//
// Three routes are provided. partial_mmd_qp is the reference solver
// (projected gradient with an exact projection); partial_mmd_adhoc
// reproduces the randomized Newton/gradient scheme with its
// clamp-then-renormalize step, which may leave weights above the cap;
// partial_mmd_two_stage derives feasible weights from the partial optimal
// transport coupling and upper-bounds the minimum.
#pragma once

#include <cstddef>
#include <vector>

#include "driftbridge/mmd.hpp"
#include "driftbridge/rng.hpp"
#include "driftbridge/types.hpp"

namespace driftbridge {

struct BoxSimplexWeights {
  std::vector<double> w;
  double alpha = 1.0;

  double cap() const { return 1.0 / (alpha * static_cast<double>(w.size())); }
  double max_cap_violation() const;
};

enum class PartialMmdMethod { qp, adhoc, two_stage };

struct PartialMmdResult {
  double value = 0.0;  // achieved MMD^2 objective
  BoxSimplexWeights weights;
  PartialMmdMethod method = PartialMmdMethod::qp;
  std::size_t iterations = 0;
  // Diagnostics for the ad-hoc route.
  std::size_t newton_fallbacks = 0;
  double max_cap_violation = 0.0;
  // Objective after every accepted candidate; non-increasing by construction.
  std::vector<double> objective_trace;
};

// Euclidean projection onto {w : 0 <= w_i <= cap, sum w_i = 1} via bisection
// on the shift of the clamped-affine map.
std::vector<double> project_box_simplex(const std::vector<double>& y, double cap);

PartialMmdResult partial_mmd_qp(const MmdParts& parts, double alpha,
                                double tol = 1e-10,
                                std::size_t max_iterations = 100000);

PartialMmdResult partial_mmd_adhoc(const MmdParts& parts, double alpha,
                                   std::size_t n_iter, RngSeed seed);

PartialMmdResult partial_mmd_two_stage(const SampleSet& X, const SampleSet& Y,
                                       double alpha, double p,
                                       const KernelSpec& k,
                                       double dummy_multiplier = 1.1);

}  // namespace driftbridge
