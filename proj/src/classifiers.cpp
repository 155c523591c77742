#include "ftwnb/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

void check_step_sizes(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
}

void clamp_and_normalize(CptModel::Table& t) {
  double sum = 0.0;
  for (double& p : t) {
    p = std::max(p, kTableFloor);
    sum += p;
  }
  for (double& p : t) p /= sum;
}

}  // namespace

Prediction make_prediction(const std::array<double, kNumClasses>& log_joint) {
  Prediction p;
  p.log_joint = log_joint;
  const double los = log_joint[index_of(ClassLabel::Los)];
  const double nlos = log_joint[index_of(ClassLabel::Nlos)];
  p.label = nlos > los ? ClassLabel::Nlos : ClassLabel::Los;
  // Logistic of the log-odds, written to stay finite for large gaps.
  const double d = nlos - los;
  p.score = d >= 0.0 ? 1.0 / (1.0 + std::exp(-d)) : std::exp(d) / (1.0 + std::exp(d));
  return p;
}

Prediction wnb_predict(const CptModel& cpt, const AttributeWeights& w, const BinVector& bins) {
  cpt.check_bins(bins);
  if (w.size() != bins.size()) {
    throw SchemaMismatchError("weights have " + std::to_string(w.size()) + " entries, model has " +
                              std::to_string(bins.size()) + " features");
  }
  std::array<double, kNumClasses> lj{};
  for (auto l : {ClassLabel::Los, ClassLabel::Nlos}) {
    double acc = std::log(cpt.prior(l));
    for (std::size_t i = 0; i < bins.size(); ++i) {
      acc += w[i] * std::log(cpt.table(i, l)[bins[i]]);
    }
    lj[index_of(l)] = acc;
  }
  return make_prediction(lj);
}

Prediction nb_predict(const CptModel& cpt, const BinVector& bins) {
  return wnb_predict(cpt, AttributeWeights::unit(bins.size()), bins);
}

double error_term(const std::array<double, kNumClasses>& priors, ClassLabel truth,
                  ClassLabel predicted) {
  return std::abs(priors[index_of(truth)] - priors[index_of(predicted)]);
}

std::vector<FinetuneUpdate> finetune_deltas(const CptModel& cpt, const BinVector& bins,
                                            ClassLabel truth, ClassLabel predicted, double alpha,
                                            double beta) {
  check_step_sizes(alpha, beta);
  cpt.check_bins(bins);
  const double e = error_term(cpt.priors(), truth, predicted);
  std::vector<FinetuneUpdate> out(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& t_true = cpt.table(i, truth);
    const auto& t_pred = cpt.table(i, predicted);
    const double p_true = t_true[bins[i]];
    const double p_pred = t_pred[bins[i]];
    const double max_true = *std::max_element(t_true.begin(), t_true.end());
    const double min_pred = *std::min_element(t_pred.begin(), t_pred.end());
    auto& u = out[i];
    u.feature = i;
    u.bin = bins[i];
    u.xi_true = beta * (alpha * max_true - p_true) * e;
    u.xi_pred = beta * (alpha * p_pred - min_pred) * e;
    u.raw_true = p_true + u.xi_true;
    u.raw_pred = p_pred - u.xi_pred;
  }
  return out;
}

CptModel finetune_step(const CptModel& cpt, const BinVector& bins, ClassLabel truth,
                       ClassLabel predicted, double alpha, double beta,
                       std::vector<FinetuneUpdate>* trace) {
  auto updates = finetune_deltas(cpt, bins, truth, predicted, alpha, beta);
  CptModel next = cpt;
  for (const auto& u : updates) {
    auto& t_true = next.mutable_table(u.feature, truth);
    auto& t_pred = next.mutable_table(u.feature, predicted);
    t_true[u.bin] = u.raw_true;
    t_pred[u.bin] = u.raw_pred;
    clamp_and_normalize(t_true);
    if (predicted != truth) clamp_and_normalize(t_pred);
  }
  if (trace != nullptr) *trace = std::move(updates);
  return next;
}

void FtWnbConfig::validate() const {
  check_step_sizes(alpha, beta);
  if (n_bins == 0) throw ConfigError("bins must be at least 1");
  if (!(laplace_alpha > 0.0)) throw ConfigError("laplace alpha must be positive");
  if (!(weight_floor > 0.0)) throw ConfigError("weight floor must be positive");
}

FtWnbModel ftwnb_train(const Dataset& train, const FtWnbConfig& cfg) {
  cfg.validate();
  for (auto l : {ClassLabel::Los, ClassLabel::Nlos}) {
    if (train.count(l) == 0) {
      throw MissingClassError("training set has no " + std::string(to_string(l)) + " samples");
    }
  }

  // Phase 1: initial tables and weights.
  const auto disc = fit_bins(train, cfg.n_bins);
  const auto binned = bin_dataset(disc, train);
  FtWnbModel model;
  model.schema = train.schema();
  model.cpt = fit_cpt(binned, cfg.laplace_alpha);
  model.weights = cfg.weights == WeightScheme::Unit
                      ? AttributeWeights::unit(train.num_features())
                      : attribute_weights(binned, cfg.weight_floor);
  model.alpha = cfg.alpha;
  model.beta = cfg.beta;
  model.finetune_cap = cfg.finetune_cap;
  for (std::size_t k = 0; k < binned.size(); ++k) {
    if (wnb_predict(model.cpt, model.weights, binned.bins[k]).label != binned.labels[k]) {
      ++model.initial_train_errors;
    }
  }

  // Phase 2: fine-tune on misclassified training instances.
  std::vector<std::size_t> order(binned.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.shuffle_seed) {
    std::mt19937_64 rng(*cfg.shuffle_seed);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(order[i - 1], order[pick(rng)]);
    }
  }

  bool cap_reached = model.updates_applied >= cfg.finetune_cap;
  while (!cap_reached && model.epochs_run < cfg.max_epochs) {
    ++model.epochs_run;
    std::size_t errors = 0;
    for (auto k : order) {
      const auto& bins = binned.bins[k];
      const auto truth = binned.labels[k];
      const auto predicted = wnb_predict(model.cpt, model.weights, bins).label;
      if (predicted == truth) continue;
      ++errors;
      model.cpt = finetune_step(model.cpt, bins, truth, predicted, cfg.alpha, cfg.beta);
      if (++model.updates_applied >= cfg.finetune_cap) {
        cap_reached = true;
        break;
      }
    }
    if (errors == 0) break;
  }
  return model;
}

Prediction ftwnb_predict(const FtWnbModel& model, const FeatureVector& fv) {
  if (fv.size() != model.schema.size()) {
    throw SchemaMismatchError("feature vector has " + std::to_string(fv.size()) +
                              " values, model schema has " + std::to_string(model.schema.size()));
  }
  return wnb_predict(model.cpt, model.weights, model.cpt.discretizer().discretize(fv));
}

std::vector<Prediction> ftwnb_predict(const FtWnbModel& model, const Dataset& test) {
  if (test.schema() != model.schema) {
    throw SchemaMismatchError("test schema does not match the model schema");
  }
  std::vector<Prediction> out;
  out.reserve(test.size());
  for (const auto& s : test.samples()) out.push_back(ftwnb_predict(model, s.features));
  return out;
}

FtWnbModel nb_train(const Dataset& train, FtWnbConfig cfg) {
  cfg.finetune_cap = 0;
  cfg.weights = WeightScheme::Unit;
  return ftwnb_train(train, cfg);
}

FtWnbModel wnb_train(const Dataset& train, FtWnbConfig cfg) {
  cfg.finetune_cap = 0;
  return ftwnb_train(train, cfg);
}

}  // namespace ftwnb
