#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ftwnb/baselines.hpp"
#include "ftwnb/classifiers.hpp"
#include "ftwnb/metrics.hpp"
#include "ftwnb/serialize.hpp"
#include "ftwnb/synth.hpp"

namespace ftwnb {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// Everything needed to re-run an experiment. Echoed verbatim into every
/// report under "config".
struct ExperimentConfig {
  std::string experiment = "compare";

  // Data source: synthetic scenarios, or a CSV file when csv_path is set.
  ScenarioConfig scenario = builtin_scenario("studio");
  ScenarioConfig test_scenario = builtin_scenario("room");  // cross-scenario only
  std::optional<std::string> csv_path;
  std::optional<std::string> test_csv_path;  // cross-scenario with CSV input
  Schema schema = default_schema();
  std::size_t n_los = 1000;
  std::size_t n_nlos = 1000;  // NLoS pool before ratio subsampling

  /// NLoS:LoS ratio applied before splitting. Unset keeps CSV data as-is.
  std::optional<double> ratio = 0.1;
  std::vector<double> ratios{0.1, 0.5, 1.0};
  std::vector<std::size_t> finetune_caps{0, 10, 20, 30, 40, 60, 80};
  /// A subset of just "*" means every schema feature.
  std::vector<std::vector<std::string>> feature_subsets{{"RANGE", "RSS"}, {"*"}};

  double test_fraction = 0.3;
  bool stratified = true;
  std::vector<std::uint64_t> seeds = default_seeds();

  FtWnbConfig model;
  std::size_t mrmr_k = 5;
  BaselineParams baseline;

  static std::vector<std::uint64_t> default_seeds();
  void validate() const;
};

Json config_to_json(const ExperimentConfig& cfg);
/// Accepts either a bare config object or a whole report (its "config").
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  ConfusionMatrix cm;
  MetricsReport metrics;
  std::size_t finetune_updates = 0;
  std::vector<std::string> features;  // features the classifier used
  RocCurve roc;
};

struct Stat {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  double sem = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Stat summarize(const std::vector<double>& values);

/// All runs of one algorithm at one sweep point.
struct ResultGroup {
  Json axis_value;
  std::string algorithm;
  std::vector<RunResult> runs;

  std::vector<double> accuracies() const;
  std::vector<double> nlos_recalls() const;
};

struct ExperimentReport {
  std::string experiment;
  ExperimentConfig config;
  std::string axis_name;
  std::vector<ResultGroup> groups;
  Json reference;  // published figures, annotation only

  const ResultGroup& group(const Json& axis_value, const std::string& algorithm) const;
};

/// Algorithm names used in reports.
inline constexpr const char* kFtWnb = "FT-WNB";
inline constexpr const char* kWnb = "WNB";
inline constexpr const char* kNb = "NB";
inline constexpr const char* kKnn = "mRMR-KNN";
inline constexpr const char* kDt = "mRMR-DT";

ExperimentReport cmd_compare(const ExperimentConfig& cfg);
ExperimentReport cmd_sweep_ratio(const ExperimentConfig& cfg);
ExperimentReport cmd_sweep_finetune(const ExperimentConfig& cfg);
ExperimentReport cmd_cross_scenario(const ExperimentConfig& cfg);
ExperimentReport cmd_feature_tradeoff(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

Json report_to_json(const ExperimentReport& report);

/// Structural check against docs/report.schema.json. Returns the list of
/// problems; empty means valid.
std::vector<std::string> validate_report(const Json& report);

/// Copy of the report with every wall-clock field removed, for comparing
/// re-runs.
Json strip_timing(const Json& report);

/// Writes report.json, summary.csv and a two-column (fpr, tpr) ROC CSV per
/// algorithm and sweep point, taken from the first seed, into `dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// The (train, test) datasets a single seed sees at a given ratio.
std::pair<Dataset, Dataset> prepare_split(const ExperimentConfig& cfg, std::uint64_t seed,
                                          std::optional<double> ratio);

/// mRMR-selected feature names from the training data.
std::vector<std::string> mrmr_feature_names(const Dataset& train, std::size_t n_bins,
                                            std::size_t k);

}  // namespace ftwnb
