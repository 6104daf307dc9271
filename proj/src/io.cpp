#include "driftbridge/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace driftbridge {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'D', 'R', 'F', '1'};

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_all(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

std::uint64_t to_le64(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return __builtin_bswap64(v);
}

Matrix parse_binary(const std::string& bytes, const std::string& path) {
  if (bytes.size() < 20) throw IoError(path + ": truncated DRF1 header");
  std::uint64_t rows_le = 0, cols_le = 0;
  std::memcpy(&rows_le, bytes.data() + 4, 8);
  std::memcpy(&cols_le, bytes.data() + 12, 8);
  const std::uint64_t rows = to_le64(rows_le), cols = to_le64(cols_le);
  if (rows == 0 || cols == 0) throw IoError(path + ": empty matrix");
  const std::uint64_t count = rows * cols;
  if (cols != 0 && count / cols != rows)
    throw IoError(path + ": header overflows");
  if (bytes.size() != 20 + count * 8)
    throw IoError(path + ": payload size does not match the header");

  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + 20 + i * 8, 8);
    bits = to_le64(bits);
    double v = 0.0;
    std::memcpy(&v, &bits, 8);
    m.data[static_cast<std::size_t>(i)] = v;
  }
  check_finite(m, path.c_str());
  return m;
}

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && end && *end == '\0';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::string token;
  std::istringstream stream(line);
  while (std::getline(stream, token, ',')) {
    const auto first = token.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      tokens.emplace_back();
      continue;
    }
    const auto last = token.find_last_not_of(" \t\r");
    tokens.push_back(token.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') tokens.emplace_back();
  return tokens;
}

Matrix parse_csv(const std::string& text, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  bool first_line = true;
  std::size_t cols = 0;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> tokens = split_csv_line(line);
    std::vector<double> row(tokens.size());
    bool numeric = !tokens.empty();
    for (std::size_t j = 0; j < tokens.size(); ++j)
      numeric = numeric && parse_double(tokens[j], row[j]);
    if (!numeric) {
      if (first_line) {  // single header row is allowed
        first_line = false;
        continue;
      }
      throw IoError(path + ": non-numeric CSV row");
    }
    first_line = false;
    if (cols == 0) cols = row.size();
    if (row.size() != cols) throw IoError(path + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || cols == 0) throw IoError(path + ": no numeric rows");

  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  check_finite(m, path.c_str());
  return m;
}

json kernel_to_json(const std::optional<KernelSpec>& kernel) {
  json j;
  if (kernel) {
    j["kernel_family"] = to_string(kernel->family);
    j["lengthscale"] = kernel->lengthscale;
  } else {
    j["kernel_family"] = "auto";
    j["lengthscale"] = 0.0;
  }
  return j;
}

json spec_to_json(const StatisticSpec& spec) {
  json j = kernel_to_json(spec.kernel);
  j["kind"] = to_string(spec.kind);
  j["alpha"] = spec.alpha;
  j["p"] = spec.p;
  j["dummy_multiplier"] = spec.dummy_multiplier;
  j["adhoc_iterations"] = spec.adhoc_iterations;
  return j;
}

StatisticSpec spec_from_json(const json& j) {
  StatisticSpec spec;
  spec.kind = statistic_kind_from_string(j.at("kind").get<std::string>());
  spec.alpha = j.at("alpha").get<double>();
  spec.p = j.at("p").get<double>();
  const std::string family = j.at("kernel_family").get<std::string>();
  if (family != "auto")
    spec.kernel = KernelSpec{kernel_family_from_string(family),
                             j.at("lengthscale").get<double>()};
  spec.dummy_multiplier = j.value("dummy_multiplier", 1.1);
  spec.adhoc_iterations = j.value("adhoc_iterations", std::size_t{50});
  return spec;
}

}  // namespace

Matrix read_feature_file(const std::string& path) {
  const std::string bytes = read_all(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0)
    return parse_binary(bytes, path);
  return parse_csv(bytes, path);
}

void write_feature_csv(const std::string& path, const Matrix& m) {
  std::string out;
  out.reserve(m.data.size() * 12);
  char buffer[64];
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", m.at(i, j));
      if (j) out += ',';
      out += buffer;
    }
    out += '\n';
  }
  write_all(path, out);
}

void write_feature_binary(const std::string& path, const Matrix& m) {
  std::string out;
  out.reserve(20 + m.data.size() * 8);
  out.append(kMagic, 4);
  const std::uint64_t rows = to_le64(m.rows), cols = to_le64(m.cols);
  out.append(reinterpret_cast<const char*>(&rows), 8);
  out.append(reinterpret_cast<const char*>(&cols), 8);
  for (double v : m.data) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, 8);
    bits = to_le64(bits);
    out.append(reinterpret_cast<const char*>(&bits), 8);
  }
  write_all(path, out);
}

std::string sha256_hex_bytes(const void* data, std::size_t size) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data, size, digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_hex_file(const std::string& path) {
  const std::string bytes = read_all(path);
  return sha256_hex_bytes(bytes.data(), bytes.size());
}

std::string calibration_to_json(const CalibrationFile& calibration) {
  json j;
  j["version"] = calibration.version;
  j["spec"] = spec_to_json(calibration.spec);
  j["sizes"] = {{"n_ref", calibration.n_ref}, {"n_test", calibration.n_test}};
  j["permutations"] = calibration.permutations;
  j["seed"] = calibration.seed.value;
  j["null_samples"] = calibration.null_samples;
  j["fit"] = {{"shift", calibration.fit.shift},
              {"shape", calibration.fit.shape},
              {"scale", calibration.fit.scale}};
  j["reference_digest"] = calibration.reference_digest;
  return j.dump(2) + "\n";
}

CalibrationFile calibration_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("calibration file is not valid JSON: ") + e.what());
  }
  try {
    CalibrationFile c;
    c.version = j.at("version").get<int>();
    if (c.version != 1) throw IoError("unsupported calibration version");
    c.spec = spec_from_json(j.at("spec"));
    c.n_ref = j.at("sizes").at("n_ref").get<std::size_t>();
    c.n_test = j.at("sizes").at("n_test").get<std::size_t>();
    c.permutations = j.at("permutations").get<std::size_t>();
    c.seed.value = j.at("seed").get<std::uint64_t>();
    c.null_samples = j.at("null_samples").get<std::vector<double>>();
    c.fit.shift = j.at("fit").at("shift").get<double>();
    c.fit.shape = j.at("fit").at("shape").get<double>();
    c.fit.scale = j.at("fit").at("scale").get<double>();
    c.reference_digest = j.at("reference_digest").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw IoError(std::string("calibration file is missing fields: ") + e.what());
  }
}

std::string report_to_json(const DetectionReport& report) {
  json j;
  j["statistic"] = report.statistic;
  j["statistic_raw"] = report.statistic_raw;
  j["p_value"] = report.p_value;
  j["empirical_p_value"] = report.empirical_p_value;
  j["drift_detected"] = report.drift_detected;
  j["spec"] = spec_to_json(report.spec);
  j["sizes"] = {{"n_ref", report.n_ref},
                {"n_test", report.n_test_configured},
                {"n_batch", report.n_batch}};
  j["warning"] = report.warning;
  if (report.attribution) {
    if (!report.attribution->matches.empty()) {
      json matches = json::array();
      for (const AttributionEntry& entry : report.attribution->matches) {
        json row;
        row["test_index"] = entry.test_index;
        row["contribution"] = entry.cost_contribution;
        json pairs = json::array();
        for (const auto& [ref_index, mass] : entry.matches)
          pairs.push_back({{"ref_index", ref_index}, {"mass", mass}});
        row["matched"] = std::move(pairs);
        matches.push_back(std::move(row));
      }
      j["matches"] = std::move(matches);
    }
    if (!report.attribution->witness.empty())
      j["witness"] = report.attribution->witness;
  }
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("experiment config is not valid JSON: ") + e.what());
  }
  ExperimentConfig config;
  config.classes = j.value("classes", config.classes);
  config.dim = j.value("dim", config.dim);
  config.spread = j.value("spread", config.spread);
  config.n_reference = j.value("n_reference", config.n_reference);
  config.n_test = j.value("n_test", config.n_test);
  config.alpha = j.value("alpha", config.alpha);
  config.match_fraction = j.value("match_fraction", config.match_fraction);
  config.p_exponent = j.value("p", config.p_exponent);
  config.corruption_severity = j.value("severity", config.corruption_severity);
  config.draws_per_condition = j.value("draws_per_condition", config.draws_per_condition);
  config.permutations = j.value("permutations", config.permutations);
  config.p_threshold = j.value("p_threshold", config.p_threshold);
  config.seed.value = j.value("seed", config.seed.value);
  if (j.contains("detectors")) {
    config.detectors.clear();
    for (const auto& name : j.at("detectors"))
      config.detectors.push_back(statistic_kind_from_string(name.get<std::string>()));
  }
  return config;
}

std::string experiment_report_to_json(const ExperimentReport& report) {
  static const char* kConditionNames[] = {"balanced_clean", "imbalanced_clean",
                                          "balanced_corrupted",
                                          "imbalanced_corrupted"};
  json j;
  json config;
  config["classes"] = report.config.classes;
  config["dim"] = report.config.dim;
  config["spread"] = report.config.spread;
  config["n_reference"] = report.config.n_reference;
  config["n_test"] = report.config.n_test;
  config["alpha"] = report.config.alpha;
  config["match_fraction"] = report.config.match_fraction;
  config["p"] = report.config.p_exponent;
  config["severity"] = report.config.corruption_severity;
  config["draws_per_condition"] = report.config.draws_per_condition;
  config["permutations"] = report.config.permutations;
  config["p_threshold"] = report.config.p_threshold;
  config["seed"] = report.config.seed.value;
  json names = json::array();
  for (StatisticKind kind : report.config.detectors) names.push_back(to_string(kind));
  config["detectors"] = std::move(names);
  j["config"] = std::move(config);

  json detectors = json::array();
  for (const DetectorOutcome& outcome : report.detectors) {
    json d;
    d["kind"] = to_string(outcome.kind);
    d["auc"] = outcome.auc;
    json p_values, histograms;
    for (std::size_t cond = 0; cond < 4; ++cond) {
      p_values[kConditionNames[cond]] = outcome.p_values[cond];
      histograms[kConditionNames[cond]] = outcome.p_histograms[cond];
    }
    d["p_values"] = std::move(p_values);
    d["p_histograms"] = std::move(histograms);
    detectors.push_back(std::move(d));
  }
  j["detectors"] = std::move(detectors);
  return j.dump(2) + "\n";
}

std::string roc_to_csv(const std::vector<RocPoint>& points) {
  std::string out = "fpr,tpr\n";
  char buffer[80];
  for (const RocPoint& point : points) {
    std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g\n", point.fpr, point.tpr);
    out += buffer;
  }
  return out;
}

std::optional<SweepSpec> sweep_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    return std::nullopt;
  }
  if (!j.contains("sweep")) return std::nullopt;
  SweepSpec sweep;
  sweep.axis = j.at("sweep").at("axis").get<std::string>();
  for (const auto& v : j.at("sweep").at("values"))
    sweep.values.push_back(v.get<double>());
  if (sweep.values.empty()) throw IoError("sweep needs at least one value");
  return sweep;
}

ExperimentConfig apply_sweep_value(ExperimentConfig config, const std::string& axis,
                                   double value) {
  if (axis == "severity")
    config.corruption_severity = static_cast<int>(value);
  else if (axis == "test-size")
    config.n_test = static_cast<std::size_t>(value);
  else if (axis == "match-fraction")
    config.match_fraction = value;
  else if (axis == "exponent")
    config.p_exponent = value;
  else
    throw DomainError("unknown sweep axis: " + axis +
                      " (severity, test-size, match-fraction, exponent)");
  return config;
}

}  // namespace driftbridge
