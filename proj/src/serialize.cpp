#include "ftwnb/serialize.hpp"

#include <fstream>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

constexpr const char* kModelFormat = "ftwnb-model";
constexpr int kModelVersion = 1;

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

Json model_to_json(const FtWnbModel& model) {
  const auto& cpt = model.cpt;
  Json tables = Json::array();
  for (std::size_t i = 0; i < cpt.num_features(); ++i) {
    tables.push_back({{"LOS", cpt.table(i, ClassLabel::Los)},
                      {"NLOS", cpt.table(i, ClassLabel::Nlos)}});
  }
  return {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"schema", model.schema},
      {"priors", {{"LOS", cpt.prior(ClassLabel::Los)}, {"NLOS", cpt.prior(ClassLabel::Nlos)}}},
      {"laplace_alpha", cpt.laplace_alpha()},
      {"edges", cpt.discretizer().all_edges()},
      {"tables", tables},
      {"weights", model.weights.w},
      {"alpha", model.alpha},
      {"beta", model.beta},
      {"finetune_cap", model.finetune_cap},
      {"epochs_run", model.epochs_run},
      {"updates_applied", model.updates_applied},
      {"initial_train_errors", model.initial_train_errors},
  };
}

FtWnbModel model_from_json(const Json& j) {
  if (required<std::string>(j, "format") != kModelFormat) {
    throw ConfigError("not an FT-WNB model file");
  }
  if (required<int>(j, "version") != kModelVersion) {
    throw ConfigError("unsupported model version");
  }
  FtWnbModel model;
  model.schema = required<Schema>(j, "schema");
  Discretizer disc(required<std::vector<std::vector<double>>>(j, "edges"));
  const auto& priors = j.at("priors");
  const std::array<double, kNumClasses> p{required<double>(priors, "LOS"),
                                          required<double>(priors, "NLOS")};
  std::vector<std::array<CptModel::Table, kNumClasses>> tables;
  for (const auto& t : j.at("tables")) {
    tables.push_back({required<CptModel::Table>(t, "LOS"), required<CptModel::Table>(t, "NLOS")});
  }
  model.cpt = CptModel(std::move(disc), p, std::move(tables), required<double>(j, "laplace_alpha"));
  model.weights.w = required<std::vector<double>>(j, "weights");
  model.alpha = required<double>(j, "alpha");
  model.beta = required<double>(j, "beta");
  model.finetune_cap = required<std::size_t>(j, "finetune_cap");
  model.epochs_run = required<std::size_t>(j, "epochs_run");
  model.updates_applied = required<std::size_t>(j, "updates_applied");
  model.initial_train_errors = required<std::size_t>(j, "initial_train_errors");
  if (model.schema.size() != model.cpt.num_features() ||
      model.weights.size() != model.cpt.num_features()) {
    throw SchemaMismatchError("model file: schema, tables and weights disagree in length");
  }
  return model;
}

void save_model(const FtWnbModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_json(model).dump(2) << '\n';
}

FtWnbModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("model file " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

Json scenario_to_json(const ScenarioConfig& cfg) {
  return {
      {"name", cfg.name},
      {"schema", cfg.schema},
      {"distance_min", cfg.distance_min},
      {"distance_max", cfg.distance_max},
      {"noise_sigma", cfg.noise_sigma},
      {"bias_mean", cfg.bias_mean},
      {"bias_sigma", cfg.bias_sigma},
      {"los_mean", cfg.feature_means[0]},
      {"nlos_mean", cfg.feature_means[1]},
      {"los_sigma", cfg.feature_sigmas[0]},
      {"nlos_sigma", cfg.feature_sigmas[1]},
      {"correlation", cfg.correlation},
      {"class_separation", cfg.class_separation},
      {"partial_fraction", cfg.partial_fraction},
      {"partial_scale", cfg.partial_scale},
  };
}

ScenarioConfig scenario_from_json(const Json& j) {
  if (j.is_string()) return builtin_scenario(j.get<std::string>());
  ScenarioConfig cfg;
  cfg.name = required<std::string>(j, "name");
  cfg.schema = required<Schema>(j, "schema");
  cfg.distance_min = required<double>(j, "distance_min");
  cfg.distance_max = required<double>(j, "distance_max");
  cfg.noise_sigma = required<double>(j, "noise_sigma");
  cfg.bias_mean = required<double>(j, "bias_mean");
  cfg.bias_sigma = required<double>(j, "bias_sigma");
  cfg.feature_means[0] = required<std::vector<double>>(j, "los_mean");
  cfg.feature_means[1] = required<std::vector<double>>(j, "nlos_mean");
  cfg.feature_sigmas[0] = required<std::vector<double>>(j, "los_sigma");
  cfg.feature_sigmas[1] = required<std::vector<double>>(j, "nlos_sigma");
  cfg.correlation = required<std::vector<double>>(j, "correlation");
  cfg.class_separation = required<double>(j, "class_separation");
  cfg.partial_fraction = required<double>(j, "partial_fraction");
  cfg.partial_scale = required<double>(j, "partial_scale");
  cfg.validate();
  return cfg;
}

Json ftwnb_config_to_json(const FtWnbConfig& cfg) {
  Json j{
      {"bins", cfg.n_bins},
      {"laplace", cfg.laplace_alpha},
      {"alpha", cfg.alpha},
      {"beta", cfg.beta},
      {"finetune_cap", cfg.finetune_cap},
      {"epochs", cfg.max_epochs},
      {"weights", cfg.weights == WeightScheme::Unit ? "unit" : "mi"},
      {"weight_floor", cfg.weight_floor},
      {"shuffle_seed", nullptr},
  };
  if (cfg.shuffle_seed) j["shuffle_seed"] = *cfg.shuffle_seed;
  return j;
}

FtWnbConfig ftwnb_config_from_json(const Json& j) {
  FtWnbConfig cfg;
  cfg.n_bins = required<std::size_t>(j, "bins");
  cfg.laplace_alpha = required<double>(j, "laplace");
  cfg.alpha = required<double>(j, "alpha");
  cfg.beta = required<double>(j, "beta");
  cfg.finetune_cap = required<std::size_t>(j, "finetune_cap");
  cfg.max_epochs = required<std::size_t>(j, "epochs");
  const auto w = required<std::string>(j, "weights");
  if (w == "unit") {
    cfg.weights = WeightScheme::Unit;
  } else if (w == "mi") {
    cfg.weights = WeightScheme::MutualInformation;
  } else {
    throw ConfigError("weights must be 'mi' or 'unit', got '" + w + "'");
  }
  cfg.weight_floor = required<double>(j, "weight_floor");
  if (j.contains("shuffle_seed") && !j.at("shuffle_seed").is_null()) {
    cfg.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

}  // namespace ftwnb
