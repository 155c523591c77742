#include "ftwnb/synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

struct FeatureRow {
  double los_mean, los_sigma, nlos_mean, nlos_sigma;
};

// Column order follows default_schema(). RANGE moments are placeholders: that
// column is produced by simulate_range.
constexpr std::array<FeatureRow, 12> kStudioRows{{
    {0.0, 1.0, 0.0, 1.0},              // RANGE
    {-79.0, 2.5, -83.0, 2.5},          // RSS
    {745.0, 2.0, 745.4, 2.0},          // FP_INDEX
    {9000.0, 1500.0, 7800.0, 1500.0},  // F1_AMP
    {8000.0, 1400.0, 7000.0, 1400.0},  // F2_AMP
    {6500.0, 1300.0, 5900.0, 1300.0},  // F3_AMP
    {-81.0, 2.5, -87.0, 2.5},          // FPPL
    {-78.0, 2.5, -81.0, 2.5},          // RX_POWER
    {3.0, 1.2, 8.0, 1.2},              // POWER_RATIO
    {40.0, 8.0, 41.0, 8.0},            // NOISE_STD
    {1100.0, 150.0, 1115.0, 150.0},    // MAX_NOISE
    {1000.0, 15.0, 1002.0, 15.0},      // PREAMBLE_COUNT
}};

struct CorrEntry {
  std::size_t i, j;
  double rho;
};

// Within-class correlations from a four-factor model (early-path amplitude,
// received power, noise floor, first-path position) rounded to two decimals.
// F1/F2/F3/FPPL form the strongly coupled block.
constexpr std::array<CorrEntry, 25> kStudioCorr{{
    {3, 1, 0.40},  {4, 1, 0.40},   {4, 3, 0.79},   {5, 1, 0.36},   {5, 3, 0.72},
    {5, 4, 0.70},  {6, 1, 0.57},   {6, 3, 0.76},   {6, 4, 0.75},   {6, 5, 0.68},
    {7, 1, 0.76},  {7, 3, 0.32},   {7, 4, 0.31},   {7, 5, 0.28},   {7, 6, 0.50},
    {8, 1, -0.18}, {8, 2, 0.20},   {8, 3, -0.36},  {8, 4, -0.35},  {8, 5, -0.32},
    {8, 6, -0.34}, {8, 7, -0.14},  {10, 9, 0.60},  {11, 9, 0.22},  {11, 10, 0.24},
}};

ScenarioConfig studio() {
  ScenarioConfig cfg;
  cfg.name = "studio";
  cfg.distance_min = 0.5;
  cfg.distance_max = 4.8;
  cfg.noise_sigma = 0.05;
  cfg.bias_mean = 0.45;
  cfg.bias_sigma = 0.30;
  cfg.class_separation = 1.5;
  const auto n = cfg.schema.size();
  for (auto& v : cfg.feature_means) v.assign(n, 0.0);
  for (auto& v : cfg.feature_sigmas) v.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.feature_means[0][i] = kStudioRows[i].los_mean;
    cfg.feature_sigmas[0][i] = kStudioRows[i].los_sigma;
    cfg.feature_means[1][i] = kStudioRows[i].nlos_mean;
    cfg.feature_sigmas[1][i] = kStudioRows[i].nlos_sigma;
  }
  cfg.correlation.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cfg.set_corr(i, i, 1.0);
  for (const auto& e : kStudioCorr) cfg.set_corr(e.i, e.j, e.rho);
  return cfg;
}

// Larger room with more multipath: longer ranges, noisier ranging, weaker
// received power and somewhat smaller early-path amplitudes.
ScenarioConfig room() {
  auto cfg = studio();
  cfg.name = "room";
  cfg.distance_max = 7.2;
  cfg.noise_sigma = 0.08;
  cfg.bias_mean = 0.60;
  cfg.bias_sigma = 0.35;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& m = cfg.feature_means[c];
    m[1] -= 0.75;   // RSS
    m[3] *= 0.965;  // F1_AMP
    m[4] *= 0.965;  // F2_AMP
    m[5] *= 0.975;  // F3_AMP
    m[6] -= 0.75;   // FPPL
    m[7] -= 0.75;   // RX_POWER
    m[9] += 1.5;    // NOISE_STD
    m[10] += 30.0;  // MAX_NOISE
    auto& s = cfg.feature_sigmas[c];
    s[1] *= 1.05;
    s[6] *= 1.05;
    s[7] *= 1.05;
  }
  return cfg;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, std::string_view value, std::size_t line) {
  try {
    std::size_t used = 0;
    const std::string v(value);
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects a number, got '" + std::string(value) + "'");
  }
}

double truncated_bias(double mean, double sigma, std::mt19937_64& rng) {
  if (sigma == 0.0) return std::max(mean, 0.0);
  std::normal_distribution<double> bias(mean, sigma);
  // bias_mean >= 0 keeps the acceptance rate at or above one half.
  while (true) {
    const double b = bias(rng);
    if (b >= 0.0) return b;
  }
}

}  // namespace

void ScenarioConfig::set_corr(std::size_t i, std::size_t j, double v) {
  const auto n = schema.size();
  correlation[i * n + j] = v;
  correlation[j * n + i] = v;
}

void ScenarioConfig::validate() const {
  const auto n = schema.size();
  if (n == 0) throw ConfigError("scenario '" + name + "' has an empty schema");
  if (!(distance_min > 0.0 && distance_max >= distance_min)) {
    throw ConfigError("scenario '" + name + "': distance range must satisfy 0 < min <= max");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("scenario '" + name + "': noise_sigma < 0");
  if (!(bias_mean >= 0.0)) throw ConfigError("scenario '" + name + "': bias_mean < 0");
  if (!(bias_sigma >= 0.0)) throw ConfigError("scenario '" + name + "': bias_sigma < 0");
  if (!(class_separation >= 0.0)) {
    throw ConfigError("scenario '" + name + "': class_separation < 0");
  }
  if (!(partial_fraction >= 0.0 && partial_fraction <= 1.0)) {
    throw ConfigError("scenario '" + name + "': partial_fraction must lie in [0, 1]");
  }
  if (!(partial_scale >= 0.0 && partial_scale <= 1.0)) {
    throw ConfigError("scenario '" + name + "': partial_scale must lie in [0, 1]");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (feature_means[c].size() != n || feature_sigmas[c].size() != n) {
      throw ConfigError("scenario '" + name + "': per-class vectors must have " +
                        std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(feature_means[c][i])) {
        throw ConfigError("scenario '" + name + "': non-finite mean for " + schema[i]);
      }
      if (!(feature_sigmas[c][i] > 0.0) || !std::isfinite(feature_sigmas[c][i])) {
        throw ConfigError("scenario '" + name + "': sigma for " + schema[i] + " must be > 0");
      }
    }
  }
  if (correlation.size() != n * n) {
    throw ConfigError("scenario '" + name + "': correlation must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (corr(i, i) != 1.0) throw ConfigError("correlation diagonal must be 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (corr(i, j) != corr(j, i)) throw ConfigError("correlation must be symmetric");
      if (!(std::abs(corr(i, j)) <= 1.0)) throw ConfigError("correlation entries must be in [-1,1]");
    }
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(correlation.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("scenario '" + name + "': correlation matrix is not positive definite");
  }
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "studio") return studio();
  if (name == "room") return room();
  throw ConfigError("unknown built-in scenario '" + name + "' (expected studio or room)");
}

std::vector<std::string> builtin_scenario_names() { return {"studio", "room"}; }

ScenarioConfig parse_scenario(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  ScenarioConfig cfg = studio();
  bool named = false;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::size_t> lines;
  while (std::getline(in, raw)) {
    ++line_no;
    auto body = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key == "base") {
      if (!entries.empty()) {
        throw ConfigError("line " + std::to_string(line_no) + ": 'base' must come first");
      }
      cfg = builtin_scenario(value);
      continue;
    }
    entries.emplace_back(std::move(key), std::move(value));
    lines.push_back(line_no);
  }

  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& [key, value] = entries[e];
    const auto line = lines[e];
    auto feature = [&](std::string_view name) {
      const auto it = std::find(cfg.schema.begin(), cfg.schema.end(), name);
      if (it == cfg.schema.end()) {
        throw ConfigError("line " + std::to_string(line) + ": unknown feature '" +
                          std::string(name) + "'");
      }
      return static_cast<std::size_t>(it - cfg.schema.begin());
    };
    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot);
    if (key == "name") {
      cfg.name = value;
      named = true;
    } else if (key == "distance_min") {
      cfg.distance_min = parse_number(key, value, line);
    } else if (key == "distance_max") {
      cfg.distance_max = parse_number(key, value, line);
    } else if (key == "noise_sigma") {
      cfg.noise_sigma = parse_number(key, value, line);
    } else if (key == "bias_mean") {
      cfg.bias_mean = parse_number(key, value, line);
    } else if (key == "bias_sigma") {
      cfg.bias_sigma = parse_number(key, value, line);
    } else if (key == "class_separation") {
      cfg.class_separation = parse_number(key, value, line);
    } else if (key == "partial_fraction") {
      cfg.partial_fraction = parse_number(key, value, line);
    } else if (key == "partial_scale") {
      cfg.partial_scale = parse_number(key, value, line);
    } else if (dot != std::string::npos &&
               (head == "los_mean" || head == "nlos_mean" || head == "los_sigma" ||
                head == "nlos_sigma")) {
      const auto i = feature(std::string_view(key).substr(dot + 1));
      const auto c = head.starts_with("nlos") ? 1 : 0;
      auto& target = head.ends_with("mean") ? cfg.feature_means[c] : cfg.feature_sigmas[c];
      target[i] = parse_number(key, value, line);
    } else if (head == "corr" && dot != std::string::npos) {
      const auto rest = std::string_view(key).substr(dot + 1);
      const auto dot2 = rest.find('.');
      if (dot2 == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line) + ": expected corr.<A>.<B>");
      }
      const auto i = feature(rest.substr(0, dot2));
      const auto j = feature(rest.substr(dot2 + 1));
      if (i == j) throw ConfigError("line " + std::to_string(line) + ": diagonal is fixed at 1");
      cfg.set_corr(i, j, parse_number(key, value, line));
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (!named && !entries.empty()) cfg.name = cfg.name + "-custom";
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

double simulate_range(double true_distance, ClassLabel condition, const ScenarioConfig& cfg,
                      std::mt19937_64& rng) {
  if (!(true_distance > 0.0) || !std::isfinite(true_distance)) {
    throw DomainError("true distance must be positive");
  }
  double d = true_distance;
  if (cfg.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    d += noise(rng);
  }
  if (condition == ClassLabel::Nlos) d += truncated_bias(cfg.bias_mean, cfg.bias_sigma, rng);
  return d;
}

namespace {

double partial_range(double true_distance, double scale, const ScenarioConfig& cfg,
                     std::mt19937_64& rng) {
  double d = true_distance;
  if (cfg.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    d += noise(rng);
  }
  return d + truncated_bias(scale * cfg.bias_mean, scale * cfg.bias_sigma, rng);
}

}  // namespace

SampleGenerator::SampleGenerator(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto n = cfg_.num_features();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(cfg_.correlation.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd lower = Eigen::LLT<Eigen::MatrixXd>(m).matrixL();
  chol_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      chol_[i * n + j] = lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  means_[0] = cfg_.feature_means[0];
  means_[1].resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    means_[1][i] = cfg_.feature_means[0][i] +
                   cfg_.class_separation * (cfg_.feature_means[1][i] - cfg_.feature_means[0][i]);
  }
  partial_mean_.resize(n);
  partial_sigma_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = cfg_.partial_scale;
    partial_mean_[i] = means_[0][i] + a * (means_[1][i] - means_[0][i]);
    partial_sigma_[i] =
        cfg_.feature_sigmas[0][i] + a * (cfg_.feature_sigmas[1][i] - cfg_.feature_sigmas[0][i]);
  }
  const auto it = std::find(cfg_.schema.begin(), cfg_.schema.end(), "RANGE");
  if (it != cfg_.schema.end()) range_index_ = it - cfg_.schema.begin();
}

FeatureVector SampleGenerator::draw(ClassLabel label, std::mt19937_64& rng) const {
  const auto n = cfg_.num_features();
  const auto c = index_of(label);
  bool partial = false;
  if (label == ClassLabel::Nlos && cfg_.partial_fraction > 0.0) {
    std::bernoulli_distribution obstruction(cfg_.partial_fraction);
    partial = obstruction(rng);
  }
  const auto& mean = partial ? partial_mean_ : means_[c];
  const auto& sigma = partial ? partial_sigma_ : cfg_.feature_sigmas[c];
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> z(n);
  for (auto& v : z) v = unit(rng);
  FeatureVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double correlated = 0.0;
    for (std::size_t j = 0; j <= i; ++j) correlated += chol_[i * n + j] * z[j];
    x[i] = mean[i] + sigma[i] * correlated;
  }
  if (range_index_ >= 0) {
    std::uniform_real_distribution<double> where(cfg_.distance_min, cfg_.distance_max);
    const double truth = where(rng);
    x[static_cast<std::size_t>(range_index_)] =
        partial ? partial_range(truth, cfg_.partial_scale, cfg_, rng)
                : simulate_range(truth, label, cfg_, rng);
  }
  return x;
}

Dataset SampleGenerator::generate(std::size_t n_los, std::size_t n_nlos,
                                  std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<ClassLabel> order(n_los, ClassLabel::Los);
  order.insert(order.end(), n_nlos, ClassLabel::Nlos);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  std::vector<LabeledSample> samples;
  samples.reserve(order.size());
  for (auto label : order) samples.push_back({draw(label, rng), label});
  return Dataset(cfg_.schema, std::move(samples));
}

Dataset generate_samples(const ScenarioConfig& cfg, std::size_t n_los, std::size_t n_nlos,
                         std::uint64_t seed) {
  return SampleGenerator(cfg).generate(n_los, n_nlos, seed);
}

}  // namespace ftwnb
