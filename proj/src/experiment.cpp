#include "ftwnb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ftwnb/error.hpp"
#include "ftwnb/features.hpp"

namespace ftwnb {

namespace {

constexpr const char* kAllFeatures = "*";

// splitmix64 finalizer; gives each pipeline stage its own stream per seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t {
  kTrainData = 1,
  kTrainSubsample = 2,
  kTrainSplit = 3,
  kTestData = 4,
  kTestSubsample = 5,
  kTestSplit = 6,
};

struct Source {
  const ScenarioConfig* scenario;
  const std::optional<std::string>* csv;
  Stream data_stream, subsample_stream, split_stream;
};

std::pair<Dataset, Dataset> split_from(const ExperimentConfig& cfg, const Source& src,
                                       std::uint64_t seed, std::optional<double> ratio) {
  Dataset data = src.csv->has_value()
                     ? load_dataset(**src.csv, cfg.schema)
                     : generate_samples(*src.scenario, cfg.n_los, cfg.n_nlos,
                                        derive_seed(seed, src.data_stream));
  if (ratio) data = subsample_ratio(data, *ratio, derive_seed(seed, src.subsample_stream));
  return split_train_test(data, cfg.test_fraction, derive_seed(seed, src.split_stream),
                          cfg.stratified);
}

Source train_source(const ExperimentConfig& cfg) {
  return {&cfg.scenario, &cfg.csv_path, kTrainData, kTrainSubsample, kTrainSplit};
}

Source test_source(const ExperimentConfig& cfg) {
  return {&cfg.test_scenario, &cfg.test_csv_path, kTestData, kTestSubsample, kTestSplit};
}

RunResult finish_run(std::uint64_t seed, const Dataset& train, const Dataset& test,
                     const std::vector<Prediction>& preds, double seconds) {
  RunResult r;
  r.seed = seed;
  r.n_train = train.size();
  r.n_test = test.size();
  const auto truth = test.labels();
  std::vector<ClassLabel> labels;
  std::vector<double> scores;
  labels.reserve(preds.size());
  scores.reserve(preds.size());
  for (const auto& p : preds) {
    labels.push_back(p.label);
    scores.push_back(p.score);
  }
  r.cm = confusion(truth, labels);
  r.metrics = summary_metrics(r.cm);
  if (test.count(ClassLabel::Los) > 0 && test.count(ClassLabel::Nlos) > 0) {
    r.roc = roc_auc(scores, truth);
    r.metrics.auc = r.roc.auc;
  }
  r.metrics.runtime_seconds = seconds;
  r.features = train.schema();
  return r;
}

RunResult run_bayes(const std::string& algorithm, const FtWnbConfig& model_cfg,
                    std::uint64_t seed, const Dataset& train, const Dataset& test) {
  FtWnbModel model;
  std::vector<Prediction> preds;
  const double seconds = timed([&] {
    if (algorithm == kNb) {
      model = nb_train(train, model_cfg);
    } else if (algorithm == kWnb) {
      model = wnb_train(train, model_cfg);
    } else {
      model = ftwnb_train(train, model_cfg);
    }
    preds = ftwnb_predict(model, test);
  });
  auto r = finish_run(seed, train, test, preds, seconds);
  r.finetune_updates = model.updates_applied;
  return r;
}

RunResult run_baseline(BaselineKind kind, const ExperimentConfig& cfg, std::uint64_t seed,
                       const Dataset& train, const Dataset& test) {
  std::vector<Prediction> preds;
  std::vector<std::string> names;
  const double seconds = timed([&] {
    names = mrmr_feature_names(train, cfg.model.n_bins,
                               std::min(cfg.mrmr_k, train.num_features()));
    preds = baseline_predict(kind, select_features(train, names), select_features(test, names),
                             cfg.baseline);
  });
  auto r = finish_run(seed, train, test, preds, seconds);
  r.features = names;
  return r;
}

RunResult run_algorithm(const std::string& algorithm, const ExperimentConfig& cfg,
                        std::uint64_t seed, const Dataset& train, const Dataset& test) {
  if (algorithm == kKnn) return run_baseline(BaselineKind::Knn, cfg, seed, train, test);
  if (algorithm == kDt) return run_baseline(BaselineKind::DecisionTree, cfg, seed, train, test);
  return run_bayes(algorithm, cfg.model, seed, train, test);
}

const std::vector<std::string>& all_algorithms() {
  static const std::vector<std::string> names{kFtWnb, kWnb, kNb, kKnn, kDt};
  return names;
}

ResultGroup& group_for(ExperimentReport& report, const Json& axis_value,
                       const std::string& algorithm) {
  for (auto& g : report.groups) {
    if (g.axis_value == axis_value && g.algorithm == algorithm) return g;
  }
  report.groups.push_back({axis_value, algorithm, {}});
  return report.groups.back();
}

template <typename F>
void for_each_seed(const ExperimentConfig& cfg, F&& body) {
  for (auto seed : cfg.seeds) {
    try {
      body(seed);
    } catch (const Error& e) {
      throw Error("experiment '" + cfg.experiment + "', seed " + std::to_string(seed) + ": " +
                  e.what());
    }
  }
}

Json confusion_json(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
  return {{"tp", tp}, {"fn", fn}, {"fp", fp}, {"tn", tn}};
}

Json table1_reference() {
  auto row = [](const char* name, double seconds, std::size_t tp, std::size_t fn, std::size_t fp,
                std::size_t tn, double accuracy) {
    return Json{{"algorithm", name},
                {"runtime_seconds", seconds},
                {"confusion", confusion_json(tp, fn, fp, tn)},
                {"accuracy_percent", accuracy}};
  };
  return Json::array({row("mRMR-KNN", 0.049, 986, 14, 13, 87, 97.5),
                      row("mRMR-SVM", 0.092, 982, 18, 10, 90, 97.5),
                      row("mRMR-DT", 0.104, 984, 16, 11, 89, 97.5),
                      row("mRMR-NB", 0.048, 989, 11, 10, 90, 98.1),
                      row("mRMR-NN", 0.061, 988, 12, 8, 92, 98.2),
                      row("FT-WNB", 0.041, 995, 5, 2, 98, 99.4)});
}

Json reference_for(const std::string& experiment) {
  const char* note =
      "Published figures from a 1000 LoS / 100 NLoS hardware capture; annotation only, "
      "never compared against synthetic results.";
  if (experiment == "compare") {
    return {{"note", note},
            {"table", table1_reference()},
            {"ft_wnb_rates_percent", {{"precision", 99.7}, {"recall", 99.5}, {"accuracy", 99.4}}}};
  }
  if (experiment == "sweep-ratio") {
    return {{"note", note},
            {"ratios", {0.1, 0.5, 1.0}},
            {"trend", "accuracy of every algorithm rises with the ratio; FT-WNB highest at each"}};
  }
  if (experiment == "sweep-finetune") {
    return {{"note", note},
            {"accuracy_percent_by_samples", {{{"samples", 0}, {"accuracy_percent", 98.2}},
                                             {{"samples", 10}, {"accuracy_percent", 98.6}},
                                             {{"samples", 40}, {"accuracy_percent", 99.5}}}},
            {"chosen_cap", 40}};
  }
  if (experiment == "cross-scenario") {
    return {{"note", note},
            {"rows",
             {{{"train", "studio"},
               {"test", "studio"},
               {"confusion", confusion_json(995, 5, 2, 98)},
               {"accuracy_percent", 99.4}},
              {{"train", "studio"},
               {"test", "room"},
               {"confusion", confusion_json(990, 10, 5, 95)},
               {"accuracy_percent", 98.6}}}}};
  }
  if (experiment == "feature-tradeoff") {
    return {{"note", note},
            {"rows",
             {{{"features", "RANGE+RSS"},
               {"runtime_seconds", 0.0371},
               {"los_accuracy_percent", 97.4},
               {"nlos_accuracy_percent", 91.0},
               {"accuracy_percent", 96.8}},
              {{"features", "all 12"},
               {"runtime_seconds", 0.041},
               {"los_accuracy_percent", 99.5},
               {"nlos_accuracy_percent", 98.0},
               {"accuracy_percent", 99.4}}}},
            {"runtime_difference_ms", 3.9}};
  }
  return Json::object();
}

ExperimentReport new_report(const ExperimentConfig& cfg, const std::string& experiment,
                            const std::string& axis) {
  ExperimentReport r;
  r.experiment = experiment;
  r.config = cfg;
  r.config.experiment = experiment;
  r.axis_name = axis;
  r.reference = reference_for(experiment);
  return r;
}

Json stat_json(const Stat& s) {
  return {{"mean", s.mean},     {"median", s.median}, {"stddev", s.stddev},
          {"sem", s.sem},       {"min", s.min},       {"max", s.max}};
}

Json run_json(const RunResult& r) {
  const auto& m = r.metrics;
  return {
      {"seed", r.seed},
      {"n_train", r.n_train},
      {"n_test", r.n_test},
      {"features", r.features},
      {"finetune_updates", r.finetune_updates},
      {"confusion", confusion_json(r.cm.tp, r.cm.fn, r.cm.fp, r.cm.tn)},
      {"metrics",
       {{"precision", m.precision},
        {"recall", m.recall},
        {"accuracy", m.accuracy},
        {"los_correct_rate", m.los_correct_rate},
        {"nlos_correct_rate", m.nlos_correct_rate},
        {"auc", m.auc},
        {"precision_undefined", m.precision_undefined},
        {"recall_undefined", m.recall_undefined},
        {"nlos_rate_undefined", m.nlos_rate_undefined}}},
      {"runtime_seconds", m.runtime_seconds},
  };
}

std::string axis_label(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string subset_label(const std::vector<std::string>& subset) {
  if (subset.size() == 1 && subset[0] == kAllFeatures) return "ALL";
  std::string out;
  for (const auto& n : subset) out += (out.empty() ? "" : "+") + n;
  return out;
}

void check(bool ok, std::vector<std::string>& problems, const std::string& what) {
  if (!ok) problems.push_back(what);
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
  std::vector<std::uint64_t> s(20);
  std::iota(s.begin(), s.end(), std::uint64_t{0});
  return s;
}

void ExperimentConfig::validate() const {
  model.validate();
  if (!csv_path) scenario.validate();
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1)");
  }
  auto check_ratio = [](double r) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("ratios must lie in (0, 1]");
  };
  if (ratio) check_ratio(*ratio);
  for (double r : ratios) check_ratio(r);
  if (mrmr_k == 0) throw ConfigError("mrmr_k must be at least 1");
  if (baseline.k == 0) throw ConfigError("knn k must be at least 1");
}

Stat summarize(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto m = sorted.size();
  s.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  s.min = sorted.front();
  s.max = sorted.back();
  if (m > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
    s.sem = s.stddev / std::sqrt(n);
  }
  return s;
}

std::vector<double> ResultGroup::accuracies() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.metrics.accuracy);
  return out;
}

std::vector<double> ResultGroup::nlos_recalls() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.metrics.nlos_correct_rate);
  return out;
}

const ResultGroup& ExperimentReport::group(const Json& axis_value,
                                           const std::string& algorithm) const {
  for (const auto& g : groups) {
    if (g.axis_value == axis_value && g.algorithm == algorithm) return g;
  }
  throw OutOfRangeError("no result group for " + algorithm + " at " + axis_label(axis_value));
}

std::pair<Dataset, Dataset> prepare_split(const ExperimentConfig& cfg, std::uint64_t seed,
                                          std::optional<double> ratio) {
  return split_from(cfg, train_source(cfg), seed, ratio);
}

std::vector<std::string> mrmr_feature_names(const Dataset& train, std::size_t n_bins,
                                            std::size_t k) {
  const auto binned = bin_dataset(fit_bins(train, n_bins), train);
  std::vector<std::string> names;
  for (auto i : mrmr_select(binned, k)) names.push_back(train.schema()[i]);
  return names;
}

ExperimentReport cmd_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  auto report = new_report(cfg, "compare", "ratio");
  const Json axis = cfg.ratio ? Json(*cfg.ratio) : Json(nullptr);
  for_each_seed(cfg, [&](std::uint64_t seed) {
    const auto [train, test] = prepare_split(cfg, seed, cfg.ratio);
    for (const auto& algo : all_algorithms()) {
      group_for(report, axis, algo).runs.push_back(run_algorithm(algo, cfg, seed, train, test));
    }
  });
  return report;
}

ExperimentReport cmd_sweep_ratio(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.ratios.empty()) throw ConfigError("sweep-ratio needs at least one ratio");
  auto report = new_report(cfg, "sweep-ratio", "ratio");
  for (double ratio : cfg.ratios) {
    for_each_seed(cfg, [&](std::uint64_t seed) {
      const auto [train, test] = prepare_split(cfg, seed, ratio);
      for (const auto& algo : all_algorithms()) {
        group_for(report, ratio, algo).runs.push_back(run_algorithm(algo, cfg, seed, train, test));
      }
    });
  }
  return report;
}

ExperimentReport cmd_sweep_finetune(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.finetune_caps.empty()) throw ConfigError("sweep-finetune needs at least one cap");
  auto report = new_report(cfg, "sweep-finetune", "finetune_cap");
  for_each_seed(cfg, [&](std::uint64_t seed) {
    const auto [train, test] = prepare_split(cfg, seed, cfg.ratio);
    for (auto cap : cfg.finetune_caps) {
      auto model_cfg = cfg.model;
      model_cfg.finetune_cap = cap;
      group_for(report, cap, kFtWnb).runs.push_back(run_bayes(kFtWnb, model_cfg, seed, train, test));
    }
  });
  return report;
}

ExperimentReport cmd_cross_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.csv_path.has_value() != cfg.test_csv_path.has_value()) {
    throw ConfigError("cross-scenario needs both or neither of the train and test CSV files");
  }
  auto report = new_report(cfg, "cross-scenario", "evaluation");
  const std::string same = "same-scenario";
  const std::string cross = "cross-scenario";
  for_each_seed(cfg, [&](std::uint64_t seed) {
    const auto [train, test] = prepare_split(cfg, seed, cfg.ratio);
    const auto other_test = split_from(cfg, test_source(cfg), seed, cfg.ratio).second;
    // One model serves both rows so that only the test environment differs.
    FtWnbModel model;
    std::vector<Prediction> preds;
    const double seconds = timed([&] {
      model = ftwnb_train(train, cfg.model);
      preds = ftwnb_predict(model, test);
    });
    auto r_same = finish_run(seed, train, test, preds, seconds);
    r_same.finetune_updates = model.updates_applied;
    group_for(report, same, kFtWnb).runs.push_back(std::move(r_same));

    std::vector<Prediction> other_preds;
    const double other_seconds = timed([&] { other_preds = ftwnb_predict(model, other_test); });
    auto r_cross = finish_run(seed, train, other_test, other_preds, other_seconds);
    r_cross.finetune_updates = model.updates_applied;
    group_for(report, cross, kFtWnb).runs.push_back(std::move(r_cross));
  });
  return report;
}

ExperimentReport cmd_feature_tradeoff(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.feature_subsets.empty()) throw ConfigError("feature-tradeoff needs at least one subset");
  auto report = new_report(cfg, "feature-tradeoff", "features");
  for_each_seed(cfg, [&](std::uint64_t seed) {
    const auto [train, test] = prepare_split(cfg, seed, cfg.ratio);
    for (const auto& subset : cfg.feature_subsets) {
      const bool all = subset.size() == 1 && subset[0] == kAllFeatures;
      const auto sub_train = all ? train : select_features(train, subset);
      const auto sub_test = all ? test : select_features(test, subset);
      group_for(report, subset_label(subset), kFtWnb)
          .runs.push_back(run_bayes(kFtWnb, cfg.model, seed, sub_train, sub_test));
    }
  });
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "compare") return cmd_compare(cfg);
  if (cfg.experiment == "sweep-ratio") return cmd_sweep_ratio(cfg);
  if (cfg.experiment == "sweep-finetune") return cmd_sweep_finetune(cfg);
  if (cfg.experiment == "cross-scenario") return cmd_cross_scenario(cfg);
  if (cfg.experiment == "feature-tradeoff") return cmd_feature_tradeoff(cfg);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json data{
      {"source", cfg.csv_path ? "csv" : "synthetic"},
      {"scenario", scenario_to_json(cfg.scenario)},
      {"test_scenario", scenario_to_json(cfg.test_scenario)},
      {"csv_path", cfg.csv_path ? Json(*cfg.csv_path) : Json(nullptr)},
      {"test_csv_path", cfg.test_csv_path ? Json(*cfg.test_csv_path) : Json(nullptr)},
      {"schema", cfg.schema},
      {"n_los", cfg.n_los},
      {"n_nlos", cfg.n_nlos},
  };
  return {
      {"experiment", cfg.experiment},
      {"data", data},
      {"ratio", cfg.ratio ? Json(*cfg.ratio) : Json(nullptr)},
      {"ratios", cfg.ratios},
      {"finetune_caps", cfg.finetune_caps},
      {"feature_subsets", cfg.feature_subsets},
      {"test_fraction", cfg.test_fraction},
      {"stratified", cfg.stratified},
      {"seeds", cfg.seeds},
      {"model", ftwnb_config_to_json(cfg.model)},
      {"mrmr_k", cfg.mrmr_k},
      {"knn_k", cfg.baseline.k},
      {"dt_max_depth", cfg.baseline.max_depth},
  };
}

ExperimentConfig config_from_json(const Json& in) {
  const Json& j = in.contains("schema_version") && in.contains("config") ? in.at("config") : in;
  ExperimentConfig cfg;
  try {
    cfg.experiment = j.value("experiment", cfg.experiment);
    if (j.contains("data")) {
      const auto& d = j.at("data");
      if (d.contains("scenario")) cfg.scenario = scenario_from_json(d.at("scenario"));
      if (d.contains("test_scenario")) cfg.test_scenario = scenario_from_json(d.at("test_scenario"));
      if (d.contains("csv_path") && !d.at("csv_path").is_null()) {
        cfg.csv_path = d.at("csv_path").get<std::string>();
      }
      if (d.contains("test_csv_path") && !d.at("test_csv_path").is_null()) {
        cfg.test_csv_path = d.at("test_csv_path").get<std::string>();
      }
      cfg.schema = d.value("schema", cfg.schema);
      cfg.n_los = d.value("n_los", cfg.n_los);
      cfg.n_nlos = d.value("n_nlos", cfg.n_nlos);
    }
    if (j.contains("ratio")) {
      cfg.ratio = j.at("ratio").is_null() ? std::nullopt
                                          : std::optional<double>(j.at("ratio").get<double>());
    }
    cfg.ratios = j.value("ratios", cfg.ratios);
    cfg.finetune_caps = j.value("finetune_caps", cfg.finetune_caps);
    cfg.feature_subsets = j.value("feature_subsets", cfg.feature_subsets);
    cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
    cfg.stratified = j.value("stratified", cfg.stratified);
    cfg.seeds = j.value("seeds", cfg.seeds);
    if (j.contains("model")) cfg.model = ftwnb_config_from_json(j.at("model"));
    cfg.mrmr_k = j.value("mrmr_k", cfg.mrmr_k);
    cfg.baseline.k = j.value("knn_k", cfg.baseline.k);
    cfg.baseline.max_depth = j.value("dt_max_depth", cfg.baseline.max_depth);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return config_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

Json report_to_json(const ExperimentReport& report) {
  Json values = Json::array();
  Json results = Json::array();
  for (const auto& g : report.groups) {
    if (std::find(values.begin(), values.end(), g.axis_value) == values.end()) {
      values.push_back(g.axis_value);
    }
    Json runs = Json::array();
    std::vector<double> runtimes;
    std::vector<double> aucs;
    for (const auto& r : g.runs) {
      runs.push_back(run_json(r));
      runtimes.push_back(r.metrics.runtime_seconds);
      aucs.push_back(r.metrics.auc);
    }
    std::vector<double> precision;
    std::vector<double> recall;
    for (const auto& r : g.runs) {
      precision.push_back(r.metrics.precision);
      recall.push_back(r.metrics.recall);
    }
    results.push_back({
        {"axis_value", g.axis_value},
        {"algorithm", g.algorithm},
        {"runs", runs},
        {"summary",
         {{"n_runs", g.runs.size()},
          {"accuracy", stat_json(summarize(g.accuracies()))},
          {"precision", stat_json(summarize(precision))},
          {"recall", stat_json(summarize(recall))},
          {"nlos_correct_rate", stat_json(summarize(g.nlos_recalls()))},
          {"auc", stat_json(summarize(aucs))},
          {"runtime_seconds", stat_json(summarize(runtimes))}}},
    });
  }
  return {
      {"schema_version", kReportSchemaVersion},
      {"experiment", report.experiment},
      {"positive_class",
       {{"confusion_and_rates", "LOS"}, {"roc_and_auc", "NLOS"}}},
      {"config", config_to_json(report.config)},
      {"axis", {{"name", report.axis_name}, {"values", values}}},
      {"results", results},
      {"reference", report.reference},
  };
}

std::vector<std::string> validate_report(const Json& r) {
  std::vector<std::string> problems;
  if (!r.is_object()) return {"report is not an object"};
  check(r.value("schema_version", "") == kReportSchemaVersion, problems,
        "schema_version must be " + std::string(kReportSchemaVersion));
  check(r.contains("experiment") && r["experiment"].is_string(), problems,
        "experiment must be a string");
  check(r.contains("config") && r["config"].is_object(), problems, "config must be an object");
  check(r.contains("reference") && r["reference"].is_object(), problems,
        "reference must be an object");
  check(r.contains("axis") && r["axis"].is_object() && r["axis"].contains("name") &&
            r["axis"]["name"].is_string() && r["axis"].contains("values") &&
            r["axis"]["values"].is_array(),
        problems, "axis must have a string name and a values array");
  if (!r.contains("results") || !r["results"].is_array()) {
    problems.push_back("results must be an array");
    return problems;
  }
  const auto is_rate = [](const Json& v) {
    return v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 1.0;
  };
  for (std::size_t g = 0; g < r["results"].size(); ++g) {
    const auto& group = r["results"][g];
    const std::string where = "results[" + std::to_string(g) + "]";
    check(group.contains("axis_value"), problems, where + ".axis_value missing");
    check(group.contains("algorithm") && group["algorithm"].is_string(), problems,
          where + ".algorithm must be a string");
    check(group.contains("summary") && group["summary"].is_object(), problems,
          where + ".summary must be an object");
    if (!group.contains("runs") || !group["runs"].is_array()) {
      problems.push_back(where + ".runs must be an array");
      continue;
    }
    for (std::size_t k = 0; k < group["runs"].size(); ++k) {
      const auto& run = group["runs"][k];
      const std::string at = where + ".runs[" + std::to_string(k) + "]";
      check(run.contains("seed") && run["seed"].is_number_unsigned(), problems,
            at + ".seed must be a non-negative integer");
      check(run.contains("runtime_seconds") && run["runtime_seconds"].is_number() &&
                run["runtime_seconds"].get<double>() >= 0.0,
            problems, at + ".runtime_seconds must be >= 0");
      if (!run.contains("confusion") || !run["confusion"].is_object()) {
        problems.push_back(at + ".confusion missing");
      } else {
        std::uint64_t total = 0;
        for (const char* key : {"tp", "fn", "fp", "tn"}) {
          const auto& c = run["confusion"];
          if (!c.contains(key) || !c[key].is_number_unsigned()) {
            problems.push_back(at + ".confusion." + key + " must be a non-negative integer");
          } else {
            total += c[key].get<std::uint64_t>();
          }
        }
        check(run.contains("n_test") && run["n_test"].is_number_unsigned() &&
                  run["n_test"].get<std::uint64_t>() == total,
              problems, at + ": confusion counts must sum to n_test");
      }
      if (!run.contains("metrics") || !run["metrics"].is_object()) {
        problems.push_back(at + ".metrics missing");
      } else {
        for (const char* key :
             {"precision", "recall", "accuracy", "los_correct_rate", "nlos_correct_rate", "auc"}) {
          check(run["metrics"].contains(key) && is_rate(run["metrics"][key]), problems,
                at + ".metrics." + key + " must lie in [0, 1]");
        }
      }
    }
  }
  return problems;
}

Json strip_timing(const Json& report) {
  if (report.is_object()) {
    Json out = Json::object();
    for (const auto& [key, value] : report.items()) {
      if (key == "runtime_seconds") continue;
      out[key] = strip_timing(value);
    }
    return out;
  }
  if (report.is_array()) {
    Json out = Json::array();
    for (const auto& v : report) out.push_back(strip_timing(v));
    return out;
  }
  return report;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw Error("cannot write " + (dir / "report.json").string());
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "summary.csv");
    out << report.axis_name
        << ",algorithm,n_runs,accuracy_mean,accuracy_median,accuracy_sem,nlos_correct_rate_mean,"
           "los_correct_rate_mean,precision_mean,auc_mean,runtime_seconds_median\n";
    for (const auto& g : report.groups) {
      std::vector<double> los;
      std::vector<double> precision;
      std::vector<double> auc;
      std::vector<double> runtime;
      for (const auto& r : g.runs) {
        los.push_back(r.metrics.los_correct_rate);
        precision.push_back(r.metrics.precision);
        auc.push_back(r.metrics.auc);
        runtime.push_back(r.metrics.runtime_seconds);
      }
      const auto acc = summarize(g.accuracies());
      std::string label = axis_label(g.axis_value);
      out << label << ',' << g.algorithm << ',' << g.runs.size() << ',' << acc.mean << ','
          << acc.median << ',' << acc.sem << ',' << summarize(g.nlos_recalls()).mean << ','
          << summarize(los).mean << ',' << summarize(precision).mean << ','
          << summarize(auc).mean << ',' << summarize(runtime).median << '\n';
    }
  }
  // ROC of the first run per (algorithm, sweep point).
  for (const auto& g : report.groups) {
    if (g.runs.empty() || g.runs.front().roc.points.empty()) continue;
    std::string name = "roc_" + g.algorithm;
    if (report.groups.size() > all_algorithms().size() ||
        report.experiment != "compare") {
      name += "_" + axis_label(g.axis_value);
    }
    for (char& c : name) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') c = '_';
    }
    std::ofstream out(dir / (name + ".csv"));
    out << "fpr,tpr\n";
    for (const auto& p : g.runs.front().roc.points) out << p.fpr << ',' << p.tpr << '\n';
  }
}

}  // namespace ftwnb
