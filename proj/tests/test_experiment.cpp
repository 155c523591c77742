#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ftwnb/error.hpp"
#include "ftwnb/experiment.hpp"

using namespace ftwnb;

namespace {

ExperimentConfig small_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.n_los = 300;
  cfg.n_nlos = 300;
  cfg.seeds = {0, 1, 2};
  cfg.finetune_caps = {0, 40};
  return cfg;
}

std::vector<std::string> labels_of(const ResultGroup& g) {
  std::vector<std::string> out;
  for (const auto& r : g.runs) out.push_back(std::to_string(r.cm.tp) + "/" + std::to_string(r.cm.tn));
  return out;
}

}  // namespace

TEST_CASE("every experiment yields a valid report") {
  for (const char* name :
       {"compare", "sweep-ratio", "sweep-finetune", "cross-scenario", "feature-tradeoff"}) {
    CAPTURE(name);
    const auto report = run_experiment(small_config(name));
    const auto j = report_to_json(report);
    CHECK(validate_report(j).empty());
    CHECK(j["schema_version"] == kReportSchemaVersion);
    for (const auto& g : report.groups) CHECK(g.runs.size() == 3);
  }
  CHECK_THROWS_AS(run_experiment(small_config("nonsense")), ConfigError);
}

TEST_CASE("validate_report notices broken reports") {
  auto j = report_to_json(run_experiment(small_config("compare")));
  j["results"][0]["runs"][0]["confusion"]["tp"] = 1000000;
  CHECK_FALSE(validate_report(j).empty());
  j.erase("schema_version");
  CHECK_FALSE(validate_report(j).empty());
}

TEST_CASE("cap 0 matches WNB exactly") {
  auto cfg = small_config("compare");
  cfg.model.finetune_cap = 0;
  const auto report = cmd_compare(cfg);
  const auto& ft = report.group(*cfg.ratio, kFtWnb);
  const auto& wnb = report.group(*cfg.ratio, kWnb);
  CHECK(ft.accuracies() == wnb.accuracies());
  CHECK(labels_of(ft) == labels_of(wnb));

  auto sweep = small_config("sweep-finetune");
  const auto sr = cmd_sweep_finetune(sweep);
  CHECK(sr.group(0, kFtWnb).accuracies() == wnb.accuracies());
}

TEST_CASE("single-ratio sweep reduces to compare") {
  auto cfg = small_config("sweep-ratio");
  cfg.ratios = {1.0};
  cfg.ratio = 1.0;
  const auto sweep = cmd_sweep_ratio(cfg);
  const auto cmp = cmd_compare(cfg);
  for (const char* algo : {kFtWnb, kWnb, kNb, kKnn, kDt}) {
    CHECK(sweep.group(1.0, algo).accuracies() == cmp.group(1.0, algo).accuracies());
  }
}

TEST_CASE("all-feature subset equals compare's FT-WNB row") {
  auto cfg = small_config("feature-tradeoff");
  const auto trade = cmd_feature_tradeoff(cfg);
  const auto cmp = cmd_compare(cfg);
  CHECK(trade.group("ALL", kFtWnb).accuracies() == cmp.group(*cfg.ratio, kFtWnb).accuracies());
  const auto& two = trade.group("RANGE+RSS", kFtWnb);
  CHECK(two.runs[0].features == std::vector<std::string>{"RANGE", "RSS"});
}

TEST_CASE("identical train and test scenarios") {
  auto cfg = small_config("cross-scenario");
  cfg.test_scenario = cfg.scenario;
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7};
  const auto report = cmd_cross_scenario(cfg);
  const auto same = summarize(report.group("same-scenario", kFtWnb).accuracies());
  const auto cross = summarize(report.group("cross-scenario", kFtWnb).accuracies());
  const double tol = 3.0 * std::sqrt(same.sem * same.sem + cross.sem * cross.sem) + 1e-9;
  CHECK(std::abs(same.mean - cross.mean) <= tol);
}

TEST_CASE("config survives a JSON round trip and reruns identically") {
  auto cfg = small_config("sweep-ratio");
  cfg.model.shuffle_seed = 5;
  const auto first = report_to_json(run_experiment(cfg));
  const auto again = config_from_json(first);
  CHECK(config_to_json(again) == config_to_json(cfg));
  const auto second = report_to_json(run_experiment(again));
  CHECK(strip_timing(first) == strip_timing(second));
  CHECK(strip_timing(first).dump().find("runtime_seconds") == std::string::npos);
}

TEST_CASE("write_report produces the files") {
  const auto dir = std::filesystem::temp_directory_path() / "ftwnb_report_test";
  std::filesystem::remove_all(dir);
  write_report(run_experiment(small_config("compare")), dir);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  bool roc = false;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    roc = roc || e.path().filename().string().rfind("roc_", 0) == 0;
  }
  CHECK(roc);
  std::filesystem::remove_all(dir);
}

TEST_CASE("more features cost more time") {
  auto cfg = small_config("feature-tradeoff");
  cfg.n_los = 1000;
  cfg.n_nlos = 1000;
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto report = cmd_feature_tradeoff(cfg);
  auto median_runtime = [](const ResultGroup& g) {
    std::vector<double> t;
    for (const auto& r : g.runs) t.push_back(r.metrics.runtime_seconds);
    return summarize(t).median;
  };
  CHECK(median_runtime(report.group("ALL", kFtWnb)) >=
        median_runtime(report.group("RANGE+RSS", kFtWnb)));
}

TEST_CASE("bad configs") {
  auto cfg = small_config("compare");
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config("compare");
  cfg.test_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(config_from_json(Json{{"model", {{"bins", "ten"}}}}), ConfigError);
}
