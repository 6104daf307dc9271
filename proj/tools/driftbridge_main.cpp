// driftbridge command line: calibrate a detector against a reference
// feature file, score test batches, run the synthetic experiment harness,
// and export transport matchings for external plotting.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftbridge/io.hpp"

namespace {

using namespace driftbridge;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("short write to " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

struct CalibrateArgs {
  std::string ref_path, out_path;
  std::string stat = "mmd";
  double alpha = 0.0;  // 0 = automatic fraction
  double p = 2.0;
  std::string kernel = "auto";
  double lengthscale = 0.0;
  double dummy_multiplier = 1.1;
  double match_fraction = 1.0;
  std::size_t test_size = 50;
  std::size_t permutations = 1000;
  std::size_t adhoc_iterations = 50;
  std::uint64_t seed = 0;
};

int cmd_calibrate(const CalibrateArgs& args) {
  const SampleSet reference = make_sample_set(read_feature_file(args.ref_path));

  DetectorConfig config;
  config.spec.kind = statistic_kind_from_string(args.stat);
  config.spec.alpha = args.alpha;
  config.spec.p = args.p;
  if (args.kernel != "auto") {
    if (!(args.lengthscale > 0.0))
      throw DomainError("--lengthscale must be positive when --kernel is explicit");
    config.spec.kernel =
        KernelSpec{kernel_family_from_string(args.kernel), args.lengthscale};
  }
  config.spec.dummy_multiplier = args.dummy_multiplier;
  config.spec.adhoc_iterations = args.adhoc_iterations;
  config.n_test = args.test_size;
  config.permutations = args.permutations;
  config.match_fraction = args.match_fraction;
  config.seed.value = args.seed;

  const Detector detector = fit_detector(config, reference);
  if (detector.empirical_only())
    throw InfeasibleError(
        "null statistics have zero variance (degenerate reference); "
        "no gamma fit is possible");

  CalibrationFile calibration;
  calibration.spec = detector.config.spec;
  calibration.n_ref = detector.null_samples.n_ref;
  calibration.n_test = detector.null_samples.n_test;
  calibration.permutations = detector.config.permutations;
  calibration.seed = detector.config.seed;
  calibration.null_samples = detector.null_samples.values;
  calibration.fit = *detector.null_fit;
  calibration.reference_digest = sha256_hex_file(args.ref_path);

  write_text(args.out_path, calibration_to_json(calibration));
  return 0;
}

struct ScoreArgs {
  std::string calib_path, ref_path, batch_path, out_path;
  bool attribute = false;
  double threshold = 0.01;
};

int cmd_score(const ScoreArgs& args) {
  std::ifstream calib_in(args.calib_path, std::ios::binary);
  if (!calib_in) throw IoError("cannot open " + args.calib_path);
  std::string calib_text((std::istreambuf_iterator<char>(calib_in)),
                         std::istreambuf_iterator<char>());
  const CalibrationFile calibration = calibration_from_json(calib_text);

  const std::string digest = sha256_hex_file(args.ref_path);
  if (digest != calibration.reference_digest)
    throw Error("reference file digest " + digest +
                " does not match the calibration (" +
                calibration.reference_digest + ")");

  const SampleSet reference = make_sample_set(read_feature_file(args.ref_path));
  const SampleSet batch = make_sample_set(read_feature_file(args.batch_path));

  Detector detector;
  detector.config.spec = calibration.spec;
  detector.config.n_test = calibration.n_test;
  detector.config.permutations = calibration.permutations;
  detector.config.p_threshold = args.threshold;
  detector.config.seed = calibration.seed;
  detector.reference = reference;
  detector.null_samples = NullSamples{calibration.null_samples, calibration.spec,
                                      calibration.n_ref, calibration.n_test,
                                      calibration.seed};
  detector.null_fit = calibration.fit;

  const DetectionReport report = score_batch(detector, batch, args.attribute);
  emit(report_to_json(report), args.out_path);
  return 0;
}

struct ExperimentArgs {
  std::string config_path, out_dir;
};

void write_experiment_outputs(const ExperimentReport& report,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text((dir / "report.json").string(), experiment_report_to_json(report));
  for (const DetectorOutcome& outcome : report.detectors) {
    const std::string name = "roc_" + to_string(outcome.kind) + ".csv";
    write_text((dir / name).string(), roc_to_csv(outcome.roc));
    std::fprintf(stderr, "%-24s auc=%.4f fit=%.2fs score=%.2fs\n",
                 to_string(outcome.kind).c_str(), outcome.auc,
                 outcome.fit_seconds, outcome.score_seconds);
  }
}

int cmd_experiment(const ExperimentArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + args.config_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());

  const ExperimentConfig base = experiment_config_from_json(text);
  const std::optional<SweepSpec> sweep = sweep_from_json(text);
  const std::filesystem::path out_dir(args.out_dir);

  if (!sweep) {
    write_experiment_outputs(run_experiment(base), out_dir);
    return 0;
  }

  nlohmann::json summary;
  summary["axis"] = sweep->axis;
  nlohmann::json runs = nlohmann::json::array();
  for (double value : sweep->values) {
    const ExperimentConfig config = apply_sweep_value(base, sweep->axis, value);
    char label[64];
    std::snprintf(label, sizeof(label), "%s-%g", sweep->axis.c_str(), value);
    std::fprintf(stderr, "[sweep %s]\n", label);
    const ExperimentReport report = run_experiment(config);
    write_experiment_outputs(report, out_dir / label);
    nlohmann::json run;
    run["value"] = value;
    for (const DetectorOutcome& outcome : report.detectors)
      run["auc"][to_string(outcome.kind)] = outcome.auc;
    runs.push_back(std::move(run));
  }
  summary["runs"] = std::move(runs);
  std::filesystem::create_directories(out_dir);
  write_text((out_dir / "sweep_summary.json").string(), summary.dump(2) + "\n");
  return 0;
}

struct ExportArgs {
  std::string ref_path, batch_path, out_path;
  double alpha = 0.1;
  double p = 2.0;
  double dummy_multiplier = 1.1;
};

int cmd_export_matching(const ExportArgs& args) {
  const SampleSet reference = make_sample_set(read_feature_file(args.ref_path));
  const SampleSet batch = make_sample_set(read_feature_file(args.batch_path));
  const PartialOtResult result =
      partial_wasserstein(reference, batch, args.alpha, args.p, args.dummy_multiplier);
  emit(matching_to_csv(export_matching(result, reference, batch)), args.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftbridge: partial-matching drift detection"};
  app.require_subcommand(1);

  CalibrateArgs cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Bootstrap a null distribution from a reference feature file");
  calibrate->add_option("--ref", cal.ref_path, "Reference feature file (CSV or DRF1)")
      ->required();
  calibrate->add_option("--stat", cal.stat,
                        "Statistic: wasserstein, partial-wasserstein, mmd, "
                        "partial-mmd-two-stage, partial-mmd-adhoc, partial-mmd-qp");
  calibrate->add_option("--alpha", cal.alpha,
                        "Fraction of reference mass to match; 0 = test-size/ref-size");
  calibrate->add_option("--p", cal.p, "Wasserstein exponent");
  calibrate->add_option("--kernel", cal.kernel,
                        "Kernel family (squared-exponential, exponential) or auto");
  calibrate->add_option("--lengthscale", cal.lengthscale,
                        "Kernel lengthscale when --kernel is explicit");
  calibrate->add_option("--dummy-multiplier", cal.dummy_multiplier,
                        "Dummy point distance multiplier");
  calibrate->add_option("--match-fraction", cal.match_fraction,
                        "Scales the automatic alpha");
  calibrate->add_option("--test-size", cal.test_size, "Calibrated batch size");
  calibrate->add_option("--permutations", cal.permutations, "Bootstrap permutations");
  calibrate->add_option("--adhoc-iterations", cal.adhoc_iterations,
                        "Iterations of the ad-hoc optimizer");
  calibrate->add_option("--seed", cal.seed, "RNG seed");
  calibrate->add_option("--out", cal.out_path, "Calibration JSON output path")
      ->required();

  ScoreArgs sc;
  CLI::App* score =
      app.add_subcommand("score", "Score a test batch against a calibration");
  score->add_option("--calib", sc.calib_path, "Calibration JSON")->required();
  score->add_option("--ref", sc.ref_path, "Reference feature file")->required();
  score->add_option("--batch", sc.batch_path, "Batch feature file")->required();
  score->add_flag("--attribute", sc.attribute, "Include per-point attribution");
  score->add_option("--threshold", sc.threshold, "Drift p-value threshold");
  score->add_option("--out", sc.out_path, "Report path (default stdout)");

  ExperimentArgs ex;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run the synthetic evaluation harness");
  experiment->add_option("--config", ex.config_path, "Experiment config JSON")
      ->required();
  experiment->add_option("--out", ex.out_dir, "Output directory")->required();

  ExportArgs mat;
  CLI::App* export_matching_cmd = app.add_subcommand(
      "export-matching", "Export the partial transport coupling as CSV");
  export_matching_cmd->add_option("--ref", mat.ref_path, "Reference feature file")
      ->required();
  export_matching_cmd->add_option("--batch", mat.batch_path, "Batch feature file")
      ->required();
  export_matching_cmd->add_option("--alpha", mat.alpha, "Fraction to match")
      ->required();
  export_matching_cmd->add_option("--p", mat.p, "Wasserstein exponent");
  export_matching_cmd->add_option("--dummy-multiplier", mat.dummy_multiplier,
                                  "Dummy point distance multiplier");
  export_matching_cmd->add_option("--out", mat.out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(cal);
    if (score->parsed()) return cmd_score(sc);
    if (experiment->parsed()) return cmd_experiment(ex);
    if (export_matching_cmd->parsed()) return cmd_export_matching(mat);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
