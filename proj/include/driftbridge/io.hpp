// File formats: numeric CSV and the DRF1 binary layout for feature
// matrices, the calibration JSON document, detection/experiment reports,
// and SHA-256 digests for binding calibrations to reference files.
#pragma once

#include <cstddef>
#include <string>

#include "driftbridge/calibration.hpp"
#include "driftbridge/detector.hpp"
#include "driftbridge/harness.hpp"
#include "driftbridge/types.hpp"

namespace driftbridge {

// Sniffs the DRF1 magic; anything else parses as numeric CSV with an
// optional single header row.
Matrix read_feature_file(const std::string& path);

// 17 significant digits per value; guarantees round-trip to 1e-15 relative.
void write_feature_csv(const std::string& path, const Matrix& m);

// "DRF1", u64 LE rows, u64 LE cols, then rows*cols little-endian doubles.
void write_feature_binary(const std::string& path, const Matrix& m);

std::string sha256_hex_file(const std::string& path);
std::string sha256_hex_bytes(const void* data, std::size_t size);

struct CalibrationFile {
  int version = 1;
  StatisticSpec spec;
  std::size_t n_ref = 0;
  std::size_t n_test = 0;
  std::size_t permutations = 0;
  RngSeed seed;
  std::vector<double> null_samples;
  ShiftedGammaFit fit;
  std::string reference_digest;
};

std::string calibration_to_json(const CalibrationFile& calibration);
CalibrationFile calibration_from_json(const std::string& text);

std::string report_to_json(const DetectionReport& report);

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_report_to_json(const ExperimentReport& report);
std::string roc_to_csv(const std::vector<RocPoint>& points);

// Optional one-axis sweep wrapped around an experiment config file.
struct SweepSpec {
  std::string axis;  // severity | test-size | match-fraction | exponent
  std::vector<double> values;
};
std::optional<SweepSpec> sweep_from_json(const std::string& text);
ExperimentConfig apply_sweep_value(ExperimentConfig config, const std::string& axis,
                                   double value);

}  // namespace driftbridge
