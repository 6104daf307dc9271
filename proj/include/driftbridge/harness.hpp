// Desk-scale experiment harness: clustered Gaussian features stand in for
// the image-model activations, batches are drawn balanced or from a single
// class, drift is injected as additive isotropic noise, and every configured
// detector is scored over the four conditions to produce ROC/AUC summaries.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "driftbridge/calibration.hpp"
#include "driftbridge/types.hpp"

namespace driftbridge {

struct WorldConfig {
  std::size_t classes = 10;
  std::size_t dim = 32;
  double spread = 1.0;
  RngSeed seed;
};

struct SyntheticWorld {
  std::size_t classes = 0;
  std::size_t dim = 0;
  Matrix centers;  // classes x dim, spacing >= 4 * spread
  double spread = 1.0;
  RngSeed seed;
};

SyntheticWorld make_world(const WorldConfig& config);

enum class DrawMode { balanced, imbalanced };

// Balanced draws pick a class uniformly (with repetition) per point;
// imbalanced draws take every point from `imbalanced_class`.
SampleSet draw_batch(const SyntheticWorld& world, std::size_t size, DrawMode mode,
                     std::size_t imbalanced_class, RngSeed seed);

// Additive isotropic noise with sigma = {0, 0.5, 1.0, 2.0}[severity] * spread.
// Severity 0 returns the batch unchanged.
SampleSet corrupt(const SyntheticWorld& world, const SampleSet& batch,
                  int severity, RngSeed seed);

// Fraction of (positive, negative) pairs with positive > negative; ties
// count one half. Exact in integer arithmetic.
double roc_auc(std::span<const double> positive, std::span<const double> negative);

enum Condition : std::size_t {
  kBalancedClean = 0,
  kImbalancedClean = 1,
  kBalancedCorrupted = 2,
  kImbalancedCorrupted = 3,
};

struct ExperimentConfig {
  std::size_t classes = 10;
  std::size_t dim = 32;
  double spread = 1.0;
  std::size_t n_reference = 1000;
  std::size_t n_test = 50;
  double alpha = 0.0;  // <= 0: automatic fraction from match_fraction
  double match_fraction = 1.0;
  double p_exponent = 2.0;
  int corruption_severity = 2;
  std::size_t draws_per_condition = 100;
  std::size_t permutations = 300;
  double p_threshold = 0.01;
  std::vector<StatisticKind> detectors = {
      StatisticKind::mmd, StatisticKind::wasserstein,
      StatisticKind::partial_wasserstein, StatisticKind::partial_mmd_two_stage};
  RngSeed seed;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct DetectorOutcome {
  StatisticKind kind = StatisticKind::mmd;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  std::array<std::vector<double>, 4> p_values;  // per Condition, draw order
  std::array<std::vector<std::size_t>, 4> p_histograms;  // 20 bins over [0,1]
  double fit_seconds = 0.0;    // wall clock; excluded from serialized reports
  double score_seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<DetectorOutcome> detectors;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace driftbridge
