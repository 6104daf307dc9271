// Fit-then-score drift detection. fit_detector binds a statistic, a
// reference sample and a bootstrap calibration into an immutable detector;
// score_batch evaluates one test batch against it.
#pragma once

#include <optional>
#include <string>

#include "driftbridge/attribution.hpp"
#include "driftbridge/calibration.hpp"

namespace driftbridge {

struct DetectorConfig {
  StatisticSpec spec;  // spec.alpha <= 0 requests the automatic fraction
  std::size_t n_test = 50;
  std::size_t permutations = 1000;
  double p_threshold = 0.01;
  // Automatic alpha = clamp(match_fraction * n_test / reference_size, (0,1]).
  double match_fraction = 1.0;
  RngSeed seed;
};

struct Detector {
  DetectorConfig config;  // spec fully resolved (kernel, alpha)
  SampleSet reference;
  NullSamples null_samples;
  // Unset when the null distribution was degenerate; p-values then fall back
  // to the empirical rule.
  std::optional<ShiftedGammaFit> null_fit;

  bool empirical_only() const { return !null_fit.has_value(); }
};

struct AttributionPayload {
  std::vector<AttributionEntry> matches;  // transport statistics
  std::vector<double> witness;            // kernel statistics, at batch points
};

struct DetectionReport {
  double statistic = 0.0;  // MMD-family values are clamped at zero here
  double statistic_raw = 0.0;
  double p_value = 1.0;
  double empirical_p_value = 1.0;
  bool drift_detected = false;
  StatisticSpec spec;
  std::size_t n_ref = 0;
  std::size_t n_test_configured = 0;
  std::size_t n_batch = 0;
  std::string warning;  // empty when none
  std::optional<AttributionPayload> attribution;
};

Detector fit_detector(const DetectorConfig& config, const SampleSet& reference);

DetectionReport score_batch(const Detector& detector, const SampleSet& batch,
                            bool attribute = false);

}  // namespace driftbridge
