#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ftwnb/dataset.hpp"

namespace ftwnb {

/// Parameters of the synthetic UWB measurement generator.
///
/// Features are drawn per class as correlated Gaussians: a standard normal
/// vector is coloured by the Cholesky factor of `correlation`, then scaled by
/// the class sigmas and shifted to the class means. The NLoS mean is
/// `los_mean + class_separation * (nlos_mean - los_mean)`, so a separation of
/// zero makes the two classes share a mean. The feature named RANGE (if
/// present) is replaced by a simulated range measurement.
///
/// NLoS draws are a two-component mixture. With probability
/// `partial_fraction` a sample is only partially obstructed: its mean,
/// sigma and ranging bias move just `partial_scale` of the way from the LoS
/// values toward the NLoS ones. The remaining samples are fully blocked.
struct ScenarioConfig {
  std::string name = "custom";
  Schema schema = default_schema();

  double distance_min = 0.5;  // m
  double distance_max = 5.0;  // m
  double noise_sigma = 0.05;  // m, sigma of the ranging noise
  double bias_mean = 0.0;     // m, NLoS bias location before truncation
  double bias_sigma = 0.0;    // m

  /// Indexed by `index_of(ClassLabel)`, each of length schema.size().
  std::array<std::vector<double>, kNumClasses> feature_means;
  std::array<std::vector<double>, kNumClasses> feature_sigmas;

  /// Row-major schema.size() x schema.size() correlation matrix.
  std::vector<double> correlation;
  double class_separation = 1.0;
  double partial_fraction = 0.0;  // in [0, 1]
  double partial_scale = 1.0;     // in [0, 1]

  std::size_t num_features() const noexcept { return schema.size(); }
  double corr(std::size_t i, std::size_t j) const { return correlation[i * schema.size() + j]; }
  void set_corr(std::size_t i, std::size_t j, double v);

  /// Throws ConfigError on any violated invariant, including a correlation
  /// matrix that is not symmetric, unit-diagonal and positive definite.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Built-in scenarios: "studio" (the default) and "room".
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Reads the key-value scenario format. `base = <builtin>` seeds the config;
/// remaining keys override individual fields. See README for the key list.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text);

/// One ranging draw: true_distance + noise, plus a non-negative bias for NLoS.
double simulate_range(double true_distance, ClassLabel condition, const ScenarioConfig& cfg,
                      std::mt19937_64& rng);

/// Generator with the correlation factor computed once. Construction
/// validates the config.
class SampleGenerator {
 public:
  explicit SampleGenerator(ScenarioConfig cfg);

  const ScenarioConfig& config() const noexcept { return cfg_; }

  /// Exactly n_los + n_nlos samples in a seed-determined interleaved order.
  Dataset generate(std::size_t n_los, std::size_t n_nlos, std::uint64_t seed) const;

 private:
  FeatureVector draw(ClassLabel label, std::mt19937_64& rng) const;

  ScenarioConfig cfg_;
  std::vector<double> chol_;  // lower-triangular, row-major
  std::array<std::vector<double>, kNumClasses> means_;
  std::vector<double> partial_mean_;
  std::vector<double> partial_sigma_;
  std::ptrdiff_t range_index_ = -1;
};

Dataset generate_samples(const ScenarioConfig& cfg, std::size_t n_los, std::size_t n_nlos,
                         std::uint64_t seed);

}  // namespace ftwnb
