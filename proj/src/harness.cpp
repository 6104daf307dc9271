#include "driftbridge/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "driftbridge/detector.hpp"
#include "driftbridge/kernels.hpp"
#include "driftbridge/parallel.hpp"

namespace driftbridge {

SyntheticWorld make_world(const WorldConfig& config) {
  if (config.classes < 2) throw DomainError("world: need at least two classes");
  if (config.dim < 1) throw DomainError("world: dimension must be positive");
  if (!(config.spread > 0.0)) throw DomainError("world: spread must be positive");

  RngStream rng(config.seed, 0x3047ull);
  Matrix centers(config.classes, config.dim);
  for (double& v : centers.data) v = rng.next_normal();

  double min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < config.classes; ++a)
    for (std::size_t b = a + 1; b < config.classes; ++b)
      min_spacing = std::min(
          min_spacing, std::sqrt(kernels::squared_distance(
                           centers.row(a), centers.row(b), config.dim)));
  if (!(min_spacing > 0.0))
    throw DomainError("world: drawn centers collide; use a different seed");

  // Rescale so clusters stay separable: spacing at least 4 * spread.
  const double target = 4.0 * config.spread;
  if (min_spacing < target) {
    const double scale = target / min_spacing;
    for (double& v : centers.data) v *= scale;
  }
  return SyntheticWorld{config.classes, config.dim, std::move(centers),
                        config.spread, config.seed};
}

SampleSet draw_batch(const SyntheticWorld& world, std::size_t size, DrawMode mode,
                     std::size_t imbalanced_class, RngSeed seed) {
  if (size < 1) throw DomainError("draw: batch size must be positive");
  if (mode == DrawMode::imbalanced && imbalanced_class >= world.classes)
    throw DomainError("draw: unknown class");

  RngStream rng(seed, 0xD4A3ull);
  Matrix points(size, world.dim);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t c = mode == DrawMode::balanced ? rng.next_index(world.classes)
                                                     : imbalanced_class;
    const double* center = world.centers.row(c);
    double* row = points.row(i);
    for (std::size_t d = 0; d < world.dim; ++d)
      row[d] = center[d] + world.spread * rng.next_normal();
  }
  return SampleSet{std::move(points)};
}

SampleSet corrupt(const SyntheticWorld& world, const SampleSet& batch,
                  int severity, RngSeed seed) {
  static constexpr double kSigmaPerSeverity[] = {0.0, 0.5, 1.0, 2.0};
  if (severity < 0 || severity > 3)
    throw DomainError("corrupt: severity must be in {0, 1, 2, 3}");
  if (batch.dim() != world.dim)
    throw DimensionError("corrupt: batch dimension differs from the world");
  if (severity == 0) return batch;

  const double sigma = kSigmaPerSeverity[severity] * world.spread;
  RngStream rng(seed, 0xC0A7ull);
  SampleSet noisy = batch;
  for (double& v : noisy.points.data) v += sigma * rng.next_normal();
  return noisy;
}

double roc_auc(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty())
    throw DomainError("roc_auc: both score sets must be nonempty");
  // 2*wins + ties stays integral, which keeps auc(a,b) + auc(b,a) == 1 exact.
  long long tally = 0;
  for (double p : positive)
    for (double n : negative) {
      if (p > n)
        tally += 2;
      else if (p == n)
        tally += 1;
    }
  return static_cast<double>(tally) /
         (2.0 * static_cast<double>(positive.size()) *
          static_cast<double>(negative.size()));
}

namespace {

std::vector<RocPoint> roc_points(std::span<const double> positive,
                                 std::span<const double> negative) {
  std::vector<std::pair<double, bool>> scored;  // (score, is_positive)
  scored.reserve(positive.size() + negative.size());
  for (double p : positive) scored.emplace_back(p, true);
  for (double n : negative) scored.emplace_back(n, false);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0});
  const double np = static_cast<double>(positive.size());
  const double nn = static_cast<double>(negative.size());
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < scored.size()) {
    const double threshold = scored[i].first;
    // Consume all entries tied at this threshold before emitting a point.
    while (i < scored.size() && scored[i].first == threshold) {
      if (scored[i].second)
        ++tp;
      else
        ++fp;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np});
  }
  return points;
}

double drift_score(double p) {
  return -std::log(std::max(p, 1e-300));
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.draws_per_condition < 1)
    throw DomainError("experiment: draws_per_condition must be positive");
  if (config.corruption_severity < 1 || config.corruption_severity > 3)
    throw DomainError("experiment: corruption severity must be in {1, 2, 3}");

  const SyntheticWorld world = make_world(
      {config.classes, config.dim, config.spread,
       RngSeed{detail::splitmix64(config.seed.value ^ 0x00D1ull)}});

  const SampleSet reference =
      draw_batch(world, config.n_reference, DrawMode::balanced, 0,
                 RngSeed{detail::splitmix64(config.seed.value ^ 0x0EF5ull)});

  // Draw all batches once; every detector scores the same draws.
  const std::size_t draws = config.draws_per_condition;
  std::array<std::vector<SampleSet>, 4> batches;
  for (std::size_t cond = 0; cond < 4; ++cond) {
    const bool imbalanced = cond == kImbalancedClean || cond == kImbalancedCorrupted;
    const bool corrupted = cond == kBalancedCorrupted || cond == kImbalancedCorrupted;
    batches[cond].reserve(draws);
    for (std::size_t t = 0; t < draws; ++t) {
      const std::uint64_t tag = 0xBA7C0ull + cond * 1000003ull + t;
      SampleSet batch = draw_batch(
          world, config.n_test,
          imbalanced ? DrawMode::imbalanced : DrawMode::balanced,
          t % world.classes,  // imbalanced classes cycle round-robin
          RngSeed{detail::splitmix64(config.seed.value ^ tag)});
      if (corrupted)
        batch = corrupt(world, batch, config.corruption_severity,
                        RngSeed{detail::splitmix64(config.seed.value ^ (tag + 0x5EEDull))});
      batches[cond].push_back(std::move(batch));
    }
  }

  ExperimentReport report;
  report.config = config;

  for (std::size_t d = 0; d < config.detectors.size(); ++d) {
    const StatisticKind kind = config.detectors[d];
    DetectorConfig det_config;
    det_config.spec.kind = kind;
    det_config.spec.alpha = config.alpha;
    det_config.spec.p = config.p_exponent;
    det_config.n_test = config.n_test;
    det_config.permutations = config.permutations;
    det_config.p_threshold = config.p_threshold;
    det_config.match_fraction = config.match_fraction;
    det_config.seed = RngSeed{detail::splitmix64(config.seed.value ^ (0xDE7ull + d))};

    DetectorOutcome outcome;
    outcome.kind = kind;

    const auto fit_start = std::chrono::steady_clock::now();
    const Detector detector = fit_detector(det_config, reference);
    outcome.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - fit_start)
            .count();

    const auto score_start = std::chrono::steady_clock::now();
    for (std::size_t cond = 0; cond < 4; ++cond) {
      auto& p_values = outcome.p_values[cond];
      p_values.assign(draws, 0.0);
      parallel_for(0, draws, [&](std::size_t t) {
        p_values[t] = score_batch(detector, batches[cond][t]).p_value;
      });
      auto& histogram = outcome.p_histograms[cond];
      histogram.assign(20, 0);
      for (double p : p_values) {
        const auto bin = std::min<std::size_t>(
            static_cast<std::size_t>(p * 20.0), 19);
        ++histogram[bin];
      }
    }
    outcome.score_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - score_start)
            .count();

    // Negatives pool the clean draws of both modes; positives the corrupted.
    std::vector<double> negatives, positives;
    for (double p : outcome.p_values[kBalancedClean]) negatives.push_back(drift_score(p));
    for (double p : outcome.p_values[kImbalancedClean]) negatives.push_back(drift_score(p));
    for (double p : outcome.p_values[kBalancedCorrupted]) positives.push_back(drift_score(p));
    for (double p : outcome.p_values[kImbalancedCorrupted]) positives.push_back(drift_score(p));

    outcome.auc = roc_auc(positives, negatives);
    outcome.roc = roc_points(positives, negatives);
    report.detectors.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace driftbridge
