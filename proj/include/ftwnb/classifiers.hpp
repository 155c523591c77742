#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftwnb/dataset.hpp"
#include "ftwnb/discretize.hpp"
#include "ftwnb/features.hpp"

namespace ftwnb {

struct Prediction {
  ClassLabel label = ClassLabel::Los;
  /// log P(l) + sum_i w(i) log P(x_i | l), indexed by class.
  std::array<double, kNumClasses> log_joint{};
  /// Posterior probability of NLoS.
  double score = 0.0;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Label is the argmax of `log_joint`; exact ties go to LoS.
Prediction make_prediction(const std::array<double, kNumClasses>& log_joint);

Prediction nb_predict(const CptModel& cpt, const BinVector& bins);
Prediction wnb_predict(const CptModel& cpt, const AttributeWeights& w, const BinVector& bins);

/// |P(l_T) - P(l_P)|
double error_term(const std::array<double, kNumClasses>& priors, ClassLabel truth,
                  ClassLabel predicted);

/// Per-feature record of one fine-tuning update. `raw_*` are the touched
/// entries after the additive step and before clamping/renormalization.
struct FinetuneUpdate {
  std::size_t feature = 0;
  std::size_t bin = 0;
  double xi_true = 0.0;
  double xi_pred = 0.0;
  double raw_true = 0.0;
  double raw_pred = 0.0;
};

inline constexpr double kTableFloor = 1e-6;

/// Step sizes for a misclassified instance, evaluated on the current tables:
///   xi_T = beta * (alpha * max_b P(b|l_T) - P(x_i|l_T)) * e
///   xi_P = beta * (alpha * P(x_i|l_P) - min_b P(b|l_P)) * e
/// with e = error_term(priors, l_T, l_P).
std::vector<FinetuneUpdate> finetune_deltas(const CptModel& cpt, const BinVector& bins,
                                            ClassLabel truth, ClassLabel predicted, double alpha,
                                            double beta);

/// Applies P(x_i|l_T) += xi_T and P(x_i|l_P) -= xi_P for every feature, then
/// clamps each touched vector at kTableFloor and renormalizes it to sum 1.
/// Negative steps are applied as computed.
CptModel finetune_step(const CptModel& cpt, const BinVector& bins, ClassLabel truth,
                       ClassLabel predicted, double alpha, double beta,
                       std::vector<FinetuneUpdate>* trace = nullptr);

enum class WeightScheme { MutualInformation, Unit };

struct FtWnbConfig {
  std::size_t n_bins = 10;
  double laplace_alpha = 1.0;
  double alpha = 0.5;
  double beta = 0.1;
  std::size_t finetune_cap = 40;
  std::size_t max_epochs = 50;
  WeightScheme weights = WeightScheme::MutualInformation;
  double weight_floor = kDefaultWeightFloor;
  /// When set, fine-tuning visits training instances in a permutation drawn
  /// from this seed instead of dataset order.
  std::optional<std::uint64_t> shuffle_seed;

  /// Throws ConfigError for alpha/beta outside (0,1) and similar.
  void validate() const;

  friend bool operator==(const FtWnbConfig&, const FtWnbConfig&) = default;
};

struct FtWnbModel {
  Schema schema;
  CptModel cpt;
  AttributeWeights weights;
  double alpha = 0.5;
  double beta = 0.1;
  std::size_t finetune_cap = 0;
  std::size_t epochs_run = 0;
  std::size_t updates_applied = 0;
  /// Training instances misclassified by the initial weighted model.
  std::size_t initial_train_errors = 0;

  friend bool operator==(const FtWnbModel&, const FtWnbModel&) = default;
};

/// Phase 1 fits bins, tables and weights on `train`. Phase 2 walks the
/// training set, applying finetune_step to each instance the current model
/// misclassifies, until an epoch is error-free, max_epochs passes are done,
/// or finetune_cap updates have been applied.
FtWnbModel ftwnb_train(const Dataset& train, const FtWnbConfig& cfg);

Prediction ftwnb_predict(const FtWnbModel& model, const FeatureVector& fv);
std::vector<Prediction> ftwnb_predict(const FtWnbModel& model, const Dataset& test);

/// Plain NB and WNB are FT-WNB with fine-tuning disabled.
FtWnbModel nb_train(const Dataset& train, FtWnbConfig cfg);
FtWnbModel wnb_train(const Dataset& train, FtWnbConfig cfg);

}  // namespace ftwnb
