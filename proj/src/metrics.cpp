#include "ftwnb/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

double rate(std::size_t num, std::size_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const ClassLabel> truth, std::span<const ClassLabel> pred) {
  if (truth.size() != pred.size()) {
    throw LengthMismatchError("confusion over " + std::to_string(truth.size()) + " labels and " +
                              std::to_string(pred.size()) + " predictions");
  }
  if (truth.empty()) throw LengthMismatchError("confusion needs at least one sample");
  ConfusionMatrix cm;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const bool los_true = truth[k] == ClassLabel::Los;
    const bool los_pred = pred[k] == ClassLabel::Los;
    if (los_true) {
      ++(los_pred ? cm.tp : cm.fn);
    } else {
      ++(los_pred ? cm.fp : cm.tn);
    }
  }
  return cm;
}

MetricsReport summary_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw LengthMismatchError("empty confusion matrix");
  MetricsReport r;
  bool unused = false;
  r.accuracy = rate(cm.tp + cm.tn, cm.total(), unused);
  r.recall = rate(cm.tp, cm.tp + cm.fn, r.recall_undefined);
  r.precision = rate(cm.tp, cm.tp + cm.fp, r.precision_undefined);
  r.los_correct_rate = r.recall;
  r.nlos_correct_rate = rate(cm.tn, cm.fp + cm.tn, r.nlos_rate_undefined);
  return r;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const ClassLabel> truth) {
  if (scores.size() != truth.size()) {
    throw LengthMismatchError("ROC over " + std::to_string(scores.size()) + " scores and " +
                              std::to_string(truth.size()) + " labels");
  }
  std::size_t pos = 0;
  for (auto l : truth) pos += l == ClassLabel::Nlos;
  const std::size_t neg = truth.size() - pos;
  if (pos == 0 || neg == 0) throw MissingClassError("ROC needs both classes in the truth labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  double area = 0.0;
  for (std::size_t j = 0; j < order.size();) {
    // Every sample sharing this score crosses the threshold together.
    const double s = scores[order[j]];
    while (j < order.size() && scores[order[j]] == s) {
      (truth[order[j]] == ClassLabel::Nlos ? tp : fp) += 1;
      ++j;
    }
    const RocPoint next{static_cast<double>(fp) / static_cast<double>(neg),
                        static_cast<double>(tp) / static_cast<double>(pos)};
    const auto& prev = roc.points.back();
    area += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) * 0.5;
    roc.points.push_back(next);
  }
  roc.auc = area;
  return roc;
}

}  // namespace ftwnb
