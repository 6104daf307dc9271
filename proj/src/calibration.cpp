#include "driftbridge/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include <boost/math/special_functions/gamma.hpp>

#include "driftbridge/kernels.hpp"
#include "driftbridge/network_simplex.hpp"
#include "driftbridge/numerics.hpp"
#include "driftbridge/ot.hpp"
#include "driftbridge/parallel.hpp"
#include "driftbridge/partial_mmd.hpp"

namespace driftbridge {

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::wasserstein: return "wasserstein";
    case StatisticKind::partial_wasserstein: return "partial-wasserstein";
    case StatisticKind::mmd: return "mmd";
    case StatisticKind::partial_mmd_two_stage: return "partial-mmd-two-stage";
    case StatisticKind::partial_mmd_adhoc: return "partial-mmd-adhoc";
    case StatisticKind::partial_mmd_qp: return "partial-mmd-qp";
  }
  throw DomainError("unknown statistic kind");
}

StatisticKind statistic_kind_from_string(const std::string& name) {
  if (name == "wasserstein") return StatisticKind::wasserstein;
  if (name == "partial-wasserstein") return StatisticKind::partial_wasserstein;
  if (name == "mmd") return StatisticKind::mmd;
  if (name == "partial-mmd-two-stage") return StatisticKind::partial_mmd_two_stage;
  if (name == "partial-mmd-adhoc") return StatisticKind::partial_mmd_adhoc;
  if (name == "partial-mmd-qp") return StatisticKind::partial_mmd_qp;
  throw DomainError("unknown statistic kind: " + name);
}

bool statistic_uses_kernel(StatisticKind kind) {
  return kind == StatisticKind::mmd || kind == StatisticKind::partial_mmd_two_stage ||
         kind == StatisticKind::partial_mmd_adhoc ||
         kind == StatisticKind::partial_mmd_qp;
}

bool statistic_uses_transport(StatisticKind kind) {
  return kind == StatisticKind::wasserstein ||
         kind == StatisticKind::partial_wasserstein ||
         kind == StatisticKind::partial_mmd_two_stage;
}

namespace {

const KernelSpec& require_kernel(const StatisticSpec& spec) {
  if (!spec.kernel)
    throw DomainError("statistic " + to_string(spec.kind) +
                      " needs a resolved kernel (auto is only valid inside "
                      "bootstrap_null and fit_detector)");
  return *spec.kernel;
}

// Keeps the dummy-column cost arithmetic identical between the direct path
// (build_partial_problem) and the pooled gather path below.
double dummy_cost_from_max_power(double max_power, double multiplier, double p) {
  double dummy_distance = multiplier * std::pow(max_power, 1.0 / p);
  if (!(dummy_distance > 0.0)) dummy_distance = 1.0;
  return std::pow(dummy_distance, p);
}

}  // namespace

double evaluate_statistic(const StatisticSpec& spec, const SampleSet& reference,
                          const SampleSet& test, RngSeed adhoc_seed) {
  switch (spec.kind) {
    case StatisticKind::wasserstein:
      return wasserstein_distance(reference, test, spec.p);
    case StatisticKind::partial_wasserstein:
      return partial_wasserstein(reference, test, spec.alpha, spec.p,
                                 spec.dummy_multiplier)
          .distance;
    case StatisticKind::mmd:
      return mmd_sq(reference, test, require_kernel(spec));
    case StatisticKind::partial_mmd_two_stage:
      return partial_mmd_two_stage(reference, test, spec.alpha, spec.p,
                                   require_kernel(spec), spec.dummy_multiplier)
          .value;
    case StatisticKind::partial_mmd_adhoc:
      return partial_mmd_adhoc(mmd_parts(reference, test, require_kernel(spec)),
                               spec.alpha, spec.adhoc_iterations, adhoc_seed)
          .value;
    case StatisticKind::partial_mmd_qp:
      return partial_mmd_qp(mmd_parts(reference, test, require_kernel(spec)),
                            spec.alpha)
          .value;
  }
  throw DomainError("unknown statistic kind");
}

std::vector<std::size_t> bootstrap_permutation_indices(std::size_t pool_size,
                                                       std::size_t n_ref,
                                                       std::size_t n_test,
                                                       RngSeed seed,
                                                       std::size_t permutation) {
  RngStream rng(seed, 0xB007ull + permutation);
  std::vector<std::size_t> indices;
  rng.sample_prefix(pool_size, n_ref + n_test, indices);
  return indices;
}

namespace {

// Pairwise matrices over the whole pool, shared read-only by all
// permutations so per-split statistics reduce to index gathers.
struct PoolCache {
  Matrix cost;       // pairwise distance^p, when a transport statistic needs it
  Matrix kernel;     // pairwise kernel values, when a kernel statistic needs it
  bool has_cost = false;
  bool has_kernel = false;
};

double gathered_mmd_sq(const Matrix& K, std::span<const std::size_t> ref,
                       std::span<const std::size_t> test) {
  const std::size_t n = ref.size(), m = test.size();
  double xx = 0.0, yy = 0.0, yx = 0.0;
  for (std::size_t a : ref) {
    const double* row = K.row(a);
    for (std::size_t b : ref) xx += row[b];
  }
  for (std::size_t s : test) {
    const double* row = K.row(s);
    for (std::size_t t : test) yy += row[t];
    for (std::size_t b : ref) yx += row[b];
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return xx / (dn * dn) + yy / (dm * dm) - 2.0 * yx / (dn * dm);
}

// Gathered transport solve; returns the real-block row sums when out_row_sums
// is given (for the two-stage weights) and the transported real-block cost.
double gathered_partial_transport(const Matrix& pool_cost,
                                  std::span<const std::size_t> ref,
                                  std::span<const std::size_t> test, double alpha,
                                  double p, double multiplier, bool with_dummy,
                                  std::vector<double>* out_row_sums) {
  const std::size_t n = ref.size(), m = test.size();
  const bool partial = with_dummy;

  const std::size_t cols = partial ? m + 1 : m;
  Matrix cost(n, cols);
  double max_power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* pool_row = pool_cost.row(ref[i]);
    double* row = cost.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      row[j] = pool_row[test[j]];
      max_power = std::max(max_power, row[j]);
    }
  }
  std::vector<double> demand;
  if (partial) {
    const double dummy = dummy_cost_from_max_power(max_power, multiplier, p);
    for (std::size_t i = 0; i < n; ++i) cost.at(i, m) = dummy;
    demand.assign(m + 1, alpha / static_cast<double>(m));
    demand[m] = 1.0 - alpha;
  } else {
    demand.assign(m, 1.0 / static_cast<double>(m));
  }
  std::vector<double> supply(n, 1.0 / static_cast<double>(n));

  TransportSimplex solver(cost, std::move(supply), std::move(demand));
  solver.solve();
  const Matrix flow = solver.extract_flow();

  double transported = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    transported += kernels::dot(cost.row(i), flow.row(i), m);
  if (out_row_sums) {
    out_row_sums->assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      (*out_row_sums)[i] = std::max(kernels::sum(flow.row(i), m), 0.0);
  }
  return transported;
}

double gathered_statistic(const StatisticSpec& spec, const PoolCache& cache,
                          const SampleSet& pool,
                          std::span<const std::size_t> ref,
                          std::span<const std::size_t> test, RngSeed adhoc_seed) {
  switch (spec.kind) {
    case StatisticKind::wasserstein: {
      const double cost = gathered_partial_transport(cache.cost, ref, test, 1.0,
                                                     spec.p, spec.dummy_multiplier,
                                                     false, nullptr);
      return std::pow(std::max(cost, 0.0), 1.0 / spec.p);
    }
    case StatisticKind::partial_wasserstein: {
      const double cost =
          gathered_partial_transport(cache.cost, ref, test, spec.alpha, spec.p,
                                     spec.dummy_multiplier, true, nullptr);
      return std::pow(std::max(cost, 0.0) / spec.alpha, 1.0 / spec.p);
    }
    case StatisticKind::mmd:
      return gathered_mmd_sq(cache.kernel, ref, test);
    case StatisticKind::partial_mmd_two_stage: {
      std::vector<double> row_sums;
      gathered_partial_transport(cache.cost, ref, test, spec.alpha, spec.p,
                                 spec.dummy_multiplier, true, &row_sums);
      const std::size_t n = ref.size(), m = test.size();
      std::vector<std::size_t> support;
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = row_sums[i] / spec.alpha;
        if (w[i] > 0.0) support.push_back(i);
      }
      const Matrix& K = cache.kernel;
      double xx = 0.0;
      for (std::size_t a : support) {
        const double* row = K.row(ref[a]);
        for (std::size_t b : support) xx += w[a] * w[b] * row[ref[b]];
      }
      double yy = 0.0, yx = 0.0;
      for (std::size_t s : test) {
        const double* row = K.row(s);
        for (std::size_t t : test) yy += row[t];
        for (std::size_t a : support) yx += w[a] * row[ref[a]];
      }
      const double dm = static_cast<double>(m);
      return xx + yy / (dm * dm) - 2.0 * yx / dm;
    }
    case StatisticKind::partial_mmd_adhoc:
    case StatisticKind::partial_mmd_qp: {
      // Optimizer statistics need materialized kernel blocks; gather them.
      const std::size_t n = ref.size(), m = test.size();
      MmdParts parts{Matrix(n, n), Matrix(m, m), Matrix(m, n)};
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = cache.kernel.row(ref[i]);
        for (std::size_t j = 0; j < n; ++j) parts.Kx.at(i, j) = row[ref[j]];
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double* row = cache.kernel.row(test[i]);
        for (std::size_t j = 0; j < m; ++j) parts.Ky.at(i, j) = row[test[j]];
        for (std::size_t j = 0; j < n; ++j) parts.Kyx.at(i, j) = row[ref[j]];
      }
      if (spec.kind == StatisticKind::partial_mmd_adhoc)
        return partial_mmd_adhoc(parts, spec.alpha, spec.adhoc_iterations,
                                 adhoc_seed)
            .value;
      return partial_mmd_qp(parts, spec.alpha).value;
    }
  }
  (void)pool;
  throw DomainError("unknown statistic kind");
}

}  // namespace

NullSamples bootstrap_null(const SampleSet& pool, const StatisticSpec& spec,
                           std::size_t n_ref, std::size_t n_test,
                           std::size_t permutations, RngSeed seed) {
  if (n_ref == 0 || n_test == 0)
    throw DomainError("bootstrap: split sizes must be positive");
  if (pool.size() < n_ref + n_test)
    throw DomainError("bootstrap: pool is smaller than n_ref + n_test");
  if (permutations < 20)
    throw DomainError("bootstrap: need at least 20 permutations");

  StatisticSpec resolved = spec;
  if (statistic_uses_kernel(spec.kind) && !resolved.kernel)
    resolved.kernel = KernelSpec{KernelFamily::squared_exponential,
                                 median_lengthscale(pool)};

  PoolCache cache;
  if (statistic_uses_transport(resolved.kind)) {
    cache.cost = pairwise_power_distances(pool, pool, resolved.p);
    cache.has_cost = true;
  }
  if (statistic_uses_kernel(resolved.kind)) {
    cache.kernel = kernel_matrix(pool, pool, *resolved.kernel);
    cache.has_kernel = true;
  }

  NullSamples samples;
  samples.spec = resolved;
  samples.n_ref = n_ref;
  samples.n_test = n_test;
  samples.seed = seed;
  samples.values.assign(permutations, 0.0);

  parallel_for(0, permutations, [&](std::size_t t) {
    const std::vector<std::size_t> indices =
        bootstrap_permutation_indices(pool.size(), n_ref, n_test, seed, t);
    const std::span<const std::size_t> ref(indices.data(), n_ref);
    const std::span<const std::size_t> test(indices.data() + n_ref, n_test);
    const RngSeed adhoc_seed{detail::splitmix64(seed.value ^ (0xADC0ull + t))};
    samples.values[t] =
        gathered_statistic(resolved, cache, pool, ref, test, adhoc_seed);
  });
  return samples;
}

ShiftedGammaFit fit_shifted_gamma(const NullSamples& samples) {
  const std::size_t count = samples.values.size();
  if (count < 20) throw DomainError("gamma fit: need at least 20 samples");
  const auto [min_it, max_it] =
      std::minmax_element(samples.values.begin(), samples.values.end());
  const double range = *max_it - *min_it;
  if (!(range > 0.0))
    throw InfeasibleError("gamma fit: null samples have zero variance");

  const double shift = *min_it - 0.01 * range;
  double mean = 0.0;
  for (double v : samples.values) mean += v - shift;
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (double v : samples.values) {
    const double d = v - shift - mean;
    var += d * d;
  }
  var /= static_cast<double>(count - 1);
  if (!(var > 0.0))
    throw InfeasibleError("gamma fit: null samples have zero variance");

  return ShiftedGammaFit{shift, mean * mean / var, var / mean};
}

NormalFit fit_normal(const NullSamples& samples) {
  const std::size_t count = samples.values.size();
  if (count < 2) throw DomainError("normal fit: need at least 2 samples");
  double mean = 0.0;
  for (double v : samples.values) mean += v;
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (double v : samples.values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(count - 1);
  if (!(var > 0.0))
    throw InfeasibleError("normal fit: null samples have zero variance");
  return NormalFit{mean, std::sqrt(var)};
}

double p_value(const ShiftedGammaFit& fit, double observed) {
  if (!(fit.shape > 0.0) || !(fit.scale > 0.0))
    throw DomainError("gamma fit has non-positive shape or scale");
  const double x = (observed - fit.shift) / fit.scale;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(fit.shape, x);
}

double p_value(const NormalFit& fit, double observed) {
  if (!(fit.stddev > 0.0)) throw DomainError("normal fit has non-positive stddev");
  const double z = (observed - fit.mean) / (fit.stddev * std::sqrt(2.0));
  return 0.5 * std::erfc(z);
}

double empirical_p_value(const NullSamples& samples, double observed) {
  if (samples.values.empty()) throw DomainError("empirical p-value of empty null");
  std::size_t exceed = 0;
  for (double v : samples.values)
    if (v >= observed) ++exceed;
  return static_cast<double>(1 + exceed) /
         static_cast<double>(1 + samples.values.size());
}

}  // namespace driftbridge
