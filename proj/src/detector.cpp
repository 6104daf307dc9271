#include "driftbridge/detector.hpp"

#include <algorithm>
#include <cmath>

#include "driftbridge/partial_mmd.hpp"

namespace driftbridge {

namespace {

RngSeed scoring_seed(const DetectorConfig& config) {
  return RngSeed{detail::splitmix64(config.seed.value ^ 0x5C04Eull)};
}

bool clamps_for_reporting(StatisticKind kind) {
  return !statistic_uses_transport(kind) ||
         kind == StatisticKind::partial_mmd_two_stage;
}

AttributionPayload build_attribution(const Detector& det, const SampleSet& batch) {
  const StatisticSpec& spec = det.config.spec;
  AttributionPayload payload;

  if (statistic_uses_transport(spec.kind)) {
    const double alpha =
        spec.kind == StatisticKind::wasserstein ? 1.0 : spec.alpha;
    payload.matches = coupling_attribution(partial_wasserstein(
        det.reference, batch, alpha, spec.p, spec.dummy_multiplier));
  }

  if (statistic_uses_kernel(spec.kind)) {
    const std::size_t n = det.reference.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    switch (spec.kind) {
      case StatisticKind::partial_mmd_two_stage:
        w = partial_mmd_two_stage(det.reference, batch, spec.alpha, spec.p,
                                  *spec.kernel, spec.dummy_multiplier)
                .weights.w;
        break;
      case StatisticKind::partial_mmd_adhoc:
        w = partial_mmd_adhoc(mmd_parts(det.reference, batch, *spec.kernel),
                              spec.alpha, spec.adhoc_iterations,
                              scoring_seed(det.config))
                .weights.w;
        break;
      case StatisticKind::partial_mmd_qp:
        w = partial_mmd_qp(mmd_parts(det.reference, batch, *spec.kernel),
                           spec.alpha)
                .weights.w;
        break;
      default:
        break;  // plain mmd keeps uniform weights
    }
    const std::vector<double> v(batch.size(), 1.0 / static_cast<double>(batch.size()));
    payload.witness =
        witness_values(det.reference, batch, w, v, *spec.kernel, batch);
  }
  return payload;
}

}  // namespace

Detector fit_detector(const DetectorConfig& config, const SampleSet& reference) {
  if (reference.size() < config.n_test + 1)
    throw DomainError("detector: reference must hold at least n_test + 1 points");
  if (config.permutations < 20)
    throw DomainError("detector: need at least 20 permutations");
  if (!(config.p_threshold > 0.0) || !(config.p_threshold < 1.0))
    throw DomainError("detector: p threshold must lie in (0, 1)");

  DetectorConfig resolved = config;
  if (statistic_uses_kernel(config.spec.kind) && !resolved.spec.kernel)
    resolved.spec.kernel = KernelSpec{KernelFamily::squared_exponential,
                                      median_lengthscale(reference)};
  if (resolved.spec.alpha <= 0.0) {
    const double automatic = resolved.match_fraction *
                             static_cast<double>(resolved.n_test) /
                             static_cast<double>(reference.size());
    resolved.spec.alpha = std::clamp(automatic, 1e-12, 1.0);
  }

  NullSamples null_samples =
      bootstrap_null(reference, resolved.spec, reference.size() - resolved.n_test,
                     resolved.n_test, resolved.permutations, resolved.seed);

  std::optional<ShiftedGammaFit> fit;
  try {
    fit = fit_shifted_gamma(null_samples);
  } catch (const InfeasibleError&) {
    // Degenerate null: keep the detector usable with empirical p-values.
    fit.reset();
  }

  return Detector{std::move(resolved), reference, std::move(null_samples), fit};
}

DetectionReport score_batch(const Detector& detector, const SampleSet& batch,
                            bool attribute) {
  if (batch.dim() != detector.reference.dim())
    throw DimensionError("score: batch dimension differs from the reference");

  const StatisticSpec& spec = detector.config.spec;
  DetectionReport report;
  report.spec = spec;
  report.n_ref = detector.reference.size();
  report.n_test_configured = detector.config.n_test;
  report.n_batch = batch.size();

  report.statistic_raw = evaluate_statistic(spec, detector.reference, batch,
                                            scoring_seed(detector.config));
  report.statistic = clamps_for_reporting(spec.kind)
                         ? std::max(report.statistic_raw, 0.0)
                         : report.statistic_raw;
  report.empirical_p_value =
      empirical_p_value(detector.null_samples, report.statistic_raw);
  report.p_value = detector.null_fit
                       ? p_value(*detector.null_fit, report.statistic_raw)
                       : report.empirical_p_value;
  report.drift_detected = report.p_value < detector.config.p_threshold;

  if (batch.size() != detector.config.n_test)
    report.warning =
        "batch size differs from the calibrated test size; p-values are "
        "calibrated for n_test = " +
        std::to_string(detector.config.n_test);

  if (attribute) report.attribution = build_attribution(detector, batch);
  return report;
}

}  // namespace driftbridge
