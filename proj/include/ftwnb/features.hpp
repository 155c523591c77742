#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ftwnb/dataset.hpp"
#include "ftwnb/discretize.hpp"

namespace ftwnb {

/// Positive per-feature exponents, normalized to mean 1.
struct AttributeWeights {
  std::vector<double> w;

  std::size_t size() const noexcept { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }

  static AttributeWeights unit(std::size_t n) { return {std::vector<double>(n, 1.0)}; }

  friend bool operator==(const AttributeWeights&, const AttributeWeights&) = default;
};

/// Symmetric Pearson correlation matrix, row-major.
struct CorrelationMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Plug-in mutual information (nats) between two discrete columns.
double mutual_information(std::span<const std::size_t> x, std::span<const std::size_t> y);
double mutual_information(std::span<const std::size_t> x_bins,
                          std::span<const ClassLabel> labels);

/// Pearson correlations. A constant feature correlates 0 with every other
/// feature and 1 with itself.
CorrelationMatrix correlation_matrix(const Dataset& d);

/// Per-feature MI with the class label.
std::vector<double> class_relevance(const BinnedDataset& d);

/// Greedy mRMR with the difference criterion
///   MI(f; class) - mean_{s in S} MI(f; s),
/// ties broken by the lower feature index.
std::vector<std::size_t> mrmr_select(const BinnedDataset& d, std::size_t k);

inline constexpr double kDefaultWeightFloor = 0.01;

/// w(i) = max(MI(feature i; class), floor), rescaled to mean 1.
AttributeWeights attribute_weights(const BinnedDataset& d, double floor = kDefaultWeightFloor);

}  // namespace ftwnb
