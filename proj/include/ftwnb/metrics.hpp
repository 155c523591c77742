#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ftwnb/dataset.hpp"

namespace ftwnb {

/// Binary confusion counts with LoS as the positive class: tp counts LoS
/// predicted LoS, fp counts NLoS predicted LoS.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fn + fp + tn; }
  std::size_t los_count() const noexcept { return tp + fn; }
  std::size_t nlos_count() const noexcept { return fp + tn; }

  /// Same counts with NLoS taken as the positive class.
  ConfusionMatrix transposed() const noexcept { return {tn, fp, fn, tp}; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const ClassLabel> truth, std::span<const ClassLabel> pred);

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double los_correct_rate = 0.0;
  double nlos_correct_rate = 0.0;
  /// Set when the matching rate had a zero denominator; the rate is then 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool nlos_rate_undefined = false;
  double auc = 0.0;
  double runtime_seconds = 0.0;
};

/// Rates from the counts; auc and runtime are left at zero.
MetricsReport summary_metrics(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0.0;
};

/// ROC with NLoS as the positive class, one point per distinct score
/// threshold; area by the trapezoidal rule.
RocCurve roc_auc(std::span<const double> scores, std::span<const ClassLabel> truth);

/// Wall-clock seconds taken by `run`, on a monotonic clock.
template <typename F>
double timed(F&& run) {
  const auto start = std::chrono::steady_clock::now();
  std::invoke(std::forward<F>(run));
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace ftwnb
