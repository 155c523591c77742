// Command-line front end: data generation, analysis, train/predict and the
// experiment drivers. Every subcommand exits 0 on success and 1 with a
// diagnostic on stderr otherwise.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ftwnb/classifiers.hpp"
#include "ftwnb/error.hpp"
#include "ftwnb/experiment.hpp"
#include "ftwnb/features.hpp"
#include "ftwnb/metrics.hpp"
#include "ftwnb/serialize.hpp"
#include "ftwnb/synth.hpp"

namespace fs = std::filesystem;
using namespace ftwnb;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t n_seeds = 0;
  std::string out = "out";
  std::string config;
  std::string schema_file;
};

struct ModelOptions {
  double alpha = 0.5;
  double beta = 0.1;
  std::size_t bins = 10;
  double laplace = 1.0;
  std::size_t finetune_cap = 40;
  std::size_t epochs = 50;
  std::string weights = "mi";
  std::uint64_t shuffle_seed = 0;
};

struct DataOptions {
  std::string data;
  std::string test_data;
  std::string scenario = "studio";
  std::string test_scenario = "room";
  std::string scenario_file;
  std::string test_scenario_file;
  std::size_t n_los = 1000;
  std::size_t n_nlos = 1000;
  double ratio = 0.1;
  std::vector<double> ratios;
  std::vector<std::size_t> caps;
  std::vector<std::string> subsets;
  double test_fraction = 0.3;
  std::size_t mrmr_k = 5;
  std::size_t knn_k = 5;
  std::size_t dt_depth = 6;
};

bool given(const CLI::App* app, const std::string& name) {
  return app->count(name) > 0;
}

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--alpha", m.alpha, "Step-size scale on the true-class table, in (0,1)")
      ->capture_default_str();
  app->add_option("--beta", m.beta, "Overall step-size multiplier, in (0,1)")
      ->capture_default_str();
  app->add_option("--bins", m.bins, "Equal-frequency bins per feature")->capture_default_str();
  app->add_option("--laplace", m.laplace, "Laplace smoothing pseudo-count")
      ->capture_default_str();
  app->add_option("--finetune-cap", m.finetune_cap, "Maximum fine-tuning updates")
      ->capture_default_str();
  app->add_option("--epochs", m.epochs, "Maximum fine-tuning passes")->capture_default_str();
  app->add_option("--weights", m.weights, "Attribute weights")
      ->check(CLI::IsMember({"mi", "unit"}))
      ->capture_default_str();
  app->add_option("--shuffle-seed", m.shuffle_seed,
                  "Visit training instances in a seeded random order during fine-tuning");
}

FtWnbConfig apply_model_options(const CLI::App* app, const ModelOptions& m, FtWnbConfig cfg) {
  if (given(app, "--alpha")) cfg.alpha = m.alpha;
  if (given(app, "--beta")) cfg.beta = m.beta;
  if (given(app, "--bins")) cfg.n_bins = m.bins;
  if (given(app, "--laplace")) cfg.laplace_alpha = m.laplace;
  if (given(app, "--finetune-cap")) cfg.finetune_cap = m.finetune_cap;
  if (given(app, "--epochs")) cfg.max_epochs = m.epochs;
  if (given(app, "--weights")) {
    cfg.weights = m.weights == "unit" ? WeightScheme::Unit : WeightScheme::MutualInformation;
  }
  if (given(app, "--shuffle-seed")) cfg.shuffle_seed = m.shuffle_seed;
  cfg.validate();
  return cfg;
}

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--data", d.data, "Input CSV instead of synthetic data");
  app->add_option("--test-data", d.test_data, "Second-environment CSV (cross-scenario)");
  app->add_option("--scenario", d.scenario, "Built-in scenario: studio or room")
      ->capture_default_str();
  app->add_option("--test-scenario", d.test_scenario, "Built-in test scenario (cross-scenario)")
      ->capture_default_str();
  app->add_option("--scenario-file", d.scenario_file, "Key-value scenario file");
  app->add_option("--test-scenario-file", d.test_scenario_file,
                  "Key-value scenario file for the test environment");
  app->add_option("--n-los", d.n_los, "Synthetic LoS samples")->capture_default_str();
  app->add_option("--n-nlos", d.n_nlos, "Synthetic NLoS pool before subsampling")
      ->capture_default_str();
}

void add_experiment_options(CLI::App* app, DataOptions& d) {
  add_data_options(app, d);
  app->add_option("--ratio", d.ratio, "NLoS:LoS ratio (0 keeps CSV data as-is)")
      ->capture_default_str();
  app->add_option("--ratios", d.ratios, "Ratios for sweep-ratio")->delimiter(',');
  app->add_option("--caps", d.caps, "Fine-tuning caps for sweep-finetune")->delimiter(',');
  app->add_option("--subsets", d.subsets,
                  "Feature subsets for feature-tradeoff, e.g. RANGE+RSS '*'");
  app->add_option("--test-fraction", d.test_fraction, "Held-out fraction")->capture_default_str();
  app->add_option("--mrmr-k", d.mrmr_k, "Features mRMR picks for the baselines")
      ->capture_default_str();
  app->add_option("--knn-k", d.knn_k, "Neighbours for mRMR-KNN")->capture_default_str();
  app->add_option("--dt-depth", d.dt_depth, "Maximum depth for mRMR-DT")->capture_default_str();
}

ScenarioConfig resolve_scenario(const std::string& file, const std::string& name) {
  return file.empty() ? builtin_scenario(name) : load_scenario(file);
}

Schema resolve_schema(const GlobalOptions& g) {
  return g.schema_file.empty() ? default_schema() : load_schema(g.schema_file);
}

Dataset load_or_generate(const GlobalOptions& g, const DataOptions& d) {
  if (!d.data.empty()) return load_dataset(d.data, resolve_schema(g));
  return generate_samples(resolve_scenario(d.scenario_file, d.scenario), d.n_los, d.n_nlos,
                          g.seed);
}

ExperimentConfig build_config(const CLI::App* app, const std::string& experiment,
                              const GlobalOptions& g, const DataOptions& d,
                              const ModelOptions& m) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  cfg.experiment = experiment;
  const auto* root = app->get_parent();
  if (!g.schema_file.empty()) cfg.schema = load_schema(g.schema_file);
  if (given(app, "--data")) cfg.csv_path = d.data;
  if (given(app, "--test-data")) cfg.test_csv_path = d.test_data;
  if (given(app, "--scenario") || given(app, "--scenario-file")) {
    cfg.scenario = resolve_scenario(d.scenario_file, d.scenario);
  }
  if (given(app, "--test-scenario") || given(app, "--test-scenario-file")) {
    cfg.test_scenario = resolve_scenario(d.test_scenario_file, d.test_scenario);
  }
  if (given(app, "--n-los")) cfg.n_los = d.n_los;
  if (given(app, "--n-nlos")) cfg.n_nlos = d.n_nlos;
  if (given(app, "--ratio")) {
    cfg.ratio = d.ratio > 0.0 ? std::optional<double>(d.ratio) : std::nullopt;
  } else if (given(app, "--data") && g.config.empty()) {
    cfg.ratio.reset();
  }
  if (given(app, "--ratios")) cfg.ratios = d.ratios;
  if (given(app, "--caps")) cfg.finetune_caps = d.caps;
  if (given(app, "--subsets")) {
    cfg.feature_subsets.clear();
    for (const auto& spec : d.subsets) {
      std::vector<std::string> names;
      std::stringstream ss(spec);
      std::string name;
      while (std::getline(ss, name, '+')) {
        if (!name.empty()) names.push_back(name);
      }
      cfg.feature_subsets.push_back(names);
    }
  }
  if (given(app, "--test-fraction")) cfg.test_fraction = d.test_fraction;
  if (given(app, "--mrmr-k")) cfg.mrmr_k = d.mrmr_k;
  if (given(app, "--knn-k")) cfg.baseline.k = d.knn_k;
  if (given(app, "--dt-depth")) cfg.baseline.max_depth = d.dt_depth;
  if (root->count("--seeds") > 0) {
    cfg.seeds.clear();
    for (std::size_t i = 0; i < g.n_seeds; ++i) cfg.seeds.push_back(g.seed + i);
  } else if (root->count("--seed") > 0) {
    cfg.seeds = {g.seed};
  }
  cfg.model = apply_model_options(app, m, cfg.model);
  cfg.validate();
  return cfg;
}

void print_summary(const ExperimentReport& report, const fs::path& dir) {
  std::cout << report.experiment << ": " << report.config.seeds.size() << " seed(s), report in "
            << (dir / "report.json").string() << '\n';
  for (const auto& g : report.groups) {
    const auto acc = summarize(g.accuracies());
    const auto nlos = summarize(g.nlos_recalls());
    std::cout << "  " << report.axis_name << '=' << (g.axis_value.is_string()
                                                         ? g.axis_value.get<std::string>()
                                                         : g.axis_value.dump())
              << "  " << g.algorithm << "  accuracy mean " << acc.mean << " median "
              << acc.median << "  NLoS rate mean " << nlos.mean << '\n';
  }
}

void write_matrix_csv(const fs::path& path, const Schema& names, const CorrelationMatrix& m) {
  std::ofstream out(path);
  out << "feature";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out << names[i];
    for (std::size_t j = 0; j < m.n; ++j) out << ',' << m(i, j);
    out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FT-WNB: fine-tuned attribute-weighted naive Bayes for LoS/NLoS identification"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--seeds", g.n_seeds, "Number of consecutive seeds starting at --seed");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--config", g.config, "Experiment config JSON (or a previous report.json)");
  app.add_option("--schema", g.schema_file, "Feature-name file overriding the default schema");

  // synth
  DataOptions synth_d;
  std::string synth_csv;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset as CSV");
  add_data_options(synth, synth_d);
  synth->add_option("--csv", synth_csv, "Output CSV path (default <out>/data.csv)");

  // analyze
  DataOptions analyze_d;
  std::size_t analyze_bins = 10;
  auto* analyze = app.add_subcommand("analyze", "Correlation matrix, mutual information, mRMR");
  add_data_options(analyze, analyze_d);
  analyze->add_option("--bins", analyze_bins, "Bins used for the MI estimates")
      ->capture_default_str();

  // train
  DataOptions train_d;
  ModelOptions train_m;
  std::string model_out;
  auto* train = app.add_subcommand("train", "Fit an FT-WNB model and save it");
  add_data_options(train, train_d);
  add_model_options(train, train_m);
  train->add_option("--model-out", model_out, "Model file (default <out>/model.json)");

  // predict
  std::string predict_model;
  std::string predict_data;
  std::string predict_out;
  auto* predict = app.add_subcommand("predict", "Label a CSV with a saved model");
  predict->add_option("--model", predict_model, "Model file")->required();
  predict->add_option("--data", predict_data, "CSV to label (NLOS column optional)")->required();
  predict->add_option("--predictions-out", predict_out,
                      "Output CSV (default <out>/predictions.csv)");

  // experiments
  struct Experiment {
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
    DataOptions d;
    ModelOptions m;
  };
  std::vector<Experiment> experiments{
      {"compare", "FT-WNB vs WNB, NB, mRMR-KNN, mRMR-DT on one split per seed"},
      {"sweep-ratio", "Accuracy across NLoS:LoS ratios"},
      {"sweep-finetune", "Accuracy across fine-tuning caps"},
      {"cross-scenario", "Train in one environment, test in another"},
      {"feature-tradeoff", "Accuracy and runtime across feature subsets"},
  };
  for (auto& e : experiments) {
    e.app = app.add_subcommand(e.name, e.help);
    add_experiment_options(e.app, e.d);
    add_model_options(e.app, e.m);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const fs::path out_dir = g.out;
    if (synth->parsed()) {
      const auto data = load_or_generate(g, synth_d);
      const fs::path path = synth_csv.empty() ? out_dir / "data.csv" : fs::path(synth_csv);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      save_dataset(data, path);
      std::cout << "wrote " << data.size() << " samples (" << data.count(ClassLabel::Los)
                << " LoS, " << data.count(ClassLabel::Nlos) << " NLoS) to " << path.string()
                << '\n';
    } else if (analyze->parsed()) {
      const auto data = load_or_generate(g, analyze_d);
      fs::create_directories(out_dir);
      write_matrix_csv(out_dir / "correlation.csv", data.schema(), correlation_matrix(data));
      const auto binned = bin_dataset(fit_bins(data, analyze_bins), data);
      const auto mi = class_relevance(binned);
      const auto weights = attribute_weights(binned);
      const auto order = mrmr_select(binned, data.num_features());
      std::vector<std::size_t> rank(order.size());
      for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
      std::ofstream out(out_dir / "mutual_information.csv");
      out << "feature,mi_class_nats,weight,mrmr_rank\n";
      for (std::size_t i = 0; i < mi.size(); ++i) {
        out << data.schema()[i] << ',' << mi[i] << ',' << weights[i] << ',' << rank[i] << '\n';
      }
      std::cout << "wrote correlation.csv and mutual_information.csv to " << out_dir.string()
                << '\n';
    } else if (train->parsed()) {
      const auto data = load_or_generate(g, train_d);
      const auto cfg = apply_model_options(train, train_m, FtWnbConfig{});
      const auto model = ftwnb_train(data, cfg);
      const fs::path path = model_out.empty() ? out_dir / "model.json" : fs::path(model_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      save_model(model, path);
      std::cout << "trained on " << data.size() << " samples: " << model.initial_train_errors
                << " initial training errors, " << model.updates_applied
                << " fine-tuning updates over " << model.epochs_run << " epoch(s); model in "
                << path.string() << '\n';
    } else if (predict->parsed()) {
      const auto model = load_model(predict_model);
      const auto rows = load_feature_rows(predict_data, model.schema);
      const fs::path path =
          predict_out.empty() ? out_dir / "predictions.csv" : fs::path(predict_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream out(path);
      out << "index,label,score\n";
      std::vector<ClassLabel> labels;
      for (std::size_t k = 0; k < rows.rows.size(); ++k) {
        const auto p = ftwnb_predict(model, rows.rows[k]);
        labels.push_back(p.label);
        out << k << ',' << (p.label == ClassLabel::Nlos ? 1 : 0) << ',' << p.score << '\n';
      }
      std::cout << "wrote " << labels.size() << " predictions to " << path.string() << '\n';
      if (rows.labels && !labels.empty()) {
        const auto m = summary_metrics(confusion(*rows.labels, labels));
        std::cout << "accuracy " << m.accuracy << ", LoS rate " << m.los_correct_rate
                  << ", NLoS rate " << m.nlos_correct_rate << '\n';
      }
    } else {
      for (auto& e : experiments) {
        if (!e.app->parsed()) continue;
        const auto cfg = build_config(e.app, e.name, g, e.d, e.m);
        const auto report = run_experiment(cfg);
        write_report(report, out_dir);
        print_summary(report, out_dir);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
