// Reference-only bootstrap of the null statistic distribution. Instead of
// permuting reference against observed test data, pseudo reference/test
// splits are drawn from the reference pool alone, the statistic is evaluated
// per split, and a shifted gamma distribution is fitted to the null samples
// for p-value computation.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "driftbridge/mmd.hpp"
#include "driftbridge/rng.hpp"
#include "driftbridge/types.hpp"

namespace driftbridge {

enum class StatisticKind {
  wasserstein,
  partial_wasserstein,
  mmd,
  partial_mmd_two_stage,
  partial_mmd_adhoc,
  partial_mmd_qp,
};

std::string to_string(StatisticKind kind);
StatisticKind statistic_kind_from_string(const std::string& name);
bool statistic_uses_kernel(StatisticKind kind);
bool statistic_uses_transport(StatisticKind kind);

struct StatisticSpec {
  StatisticKind kind = StatisticKind::mmd;
  double alpha = 1.0;
  double p = 2.0;
  // Unset means "auto": resolved from the reference by the median heuristic.
  std::optional<KernelSpec> kernel;
  double dummy_multiplier = 1.1;
  std::size_t adhoc_iterations = 50;
};

struct NullSamples {
  std::vector<double> values;  // one per permutation, in permutation order
  StatisticSpec spec;
  std::size_t n_ref = 0;
  std::size_t n_test = 0;
  RngSeed seed;
};

struct ShiftedGammaFit {
  double shift = 0.0;
  double shape = 1.0;
  double scale = 1.0;
};

struct NormalFit {
  double mean = 0.0;
  double stddev = 1.0;
};

// One statistic evaluation between a reference and a test batch. Kernel
// statistics require spec.kernel to be resolved. adhoc_seed feeds only the
// partial-mmd-adhoc optimizer.
double evaluate_statistic(const StatisticSpec& spec, const SampleSet& reference,
                          const SampleSet& test, RngSeed adhoc_seed = RngSeed{0});

// Index split used for permutation t: the first n_ref entries are the pseudo
// reference, the next n_test the pseudo test batch. Exposed for audits.
std::vector<std::size_t> bootstrap_permutation_indices(std::size_t pool_size,
                                                       std::size_t n_ref,
                                                       std::size_t n_test,
                                                       RngSeed seed,
                                                       std::size_t permutation);

// Evaluates the statistic on `permutations` pseudo splits of the pool.
// Deterministic for a fixed seed regardless of thread count. An unset
// kernel resolves via the median heuristic on the pool.
NullSamples bootstrap_null(const SampleSet& pool, const StatisticSpec& spec,
                           std::size_t n_ref, std::size_t n_test,
                           std::size_t permutations, RngSeed seed);

// shift = min - 1% of range; then method of moments on the shifted values.
// Throws InfeasibleError when the samples have zero variance.
ShiftedGammaFit fit_shifted_gamma(const NullSamples& samples);
NormalFit fit_normal(const NullSamples& samples);

// Upper-tail probability of the fitted distribution at `observed`.
double p_value(const ShiftedGammaFit& fit, double observed);
double p_value(const NormalFit& fit, double observed);

// (1 + #{values >= observed}) / (1 + count); add-one permutation convention.
double empirical_p_value(const NullSamples& samples, double observed);

}  // namespace driftbridge
