#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ftwnb/dataset.hpp"

namespace ftwnb {

using BinVector = std::vector<std::size_t>;

/// Per-feature interior cut points. A value v falls in bin
/// `#{edges <= v}`, so bins are half-open [e_{j-1}, e_j), a value equal to an
/// edge goes to the higher bin, and anything outside the training range is
/// clamped into the first or last bin.
class Discretizer {
 public:
  Discretizer() = default;
  explicit Discretizer(std::vector<std::vector<double>> edges);

  std::size_t num_features() const noexcept { return edges_.size(); }
  std::size_t num_bins(std::size_t feature) const { return edges_.at(feature).size() + 1; }
  const std::vector<double>& edges(std::size_t feature) const { return edges_.at(feature); }
  const std::vector<std::vector<double>>& all_edges() const noexcept { return edges_; }

  std::size_t bin_of(std::size_t feature, double value) const;
  BinVector discretize(const FeatureVector& fv) const;

  friend bool operator==(const Discretizer&, const Discretizer&) = default;

 private:
  std::vector<std::vector<double>> edges_;
};

/// Equal-frequency edges from the training data. Duplicate quantiles and
/// cut points at or below the feature minimum are dropped, so a constant
/// feature ends up with a single bin.
Discretizer fit_bins(const Dataset& train, std::size_t n_bins);

inline BinVector discretize(const Discretizer& disc, const FeatureVector& fv) {
  return disc.discretize(fv);
}

/// Training data after discretization. `bins[k][i]` is the bin of feature i
/// for sample k.
struct BinnedDataset {
  Discretizer discretizer;
  std::vector<BinVector> bins;
  std::vector<ClassLabel> labels;

  std::size_t size() const noexcept { return bins.size(); }
  std::size_t num_features() const noexcept { return discretizer.num_features(); }
  std::vector<std::size_t> column(std::size_t feature) const;
};

BinnedDataset bin_dataset(const Discretizer& disc, const Dataset& d);

/// Class priors and per-feature, per-class conditional probability tables
/// over the discretizer's bins.
class CptModel {
 public:
  using Table = std::vector<double>;  // probability over bins

  CptModel() = default;
  CptModel(Discretizer disc, std::array<double, kNumClasses> priors,
           std::vector<std::array<Table, kNumClasses>> tables, double laplace_alpha);

  const Discretizer& discretizer() const noexcept { return disc_; }
  const std::array<double, kNumClasses>& priors() const noexcept { return priors_; }
  double prior(ClassLabel l) const noexcept { return priors_[index_of(l)]; }
  double laplace_alpha() const noexcept { return laplace_alpha_; }
  std::size_t num_features() const noexcept { return tables_.size(); }

  const Table& table(std::size_t feature, ClassLabel l) const {
    return tables_.at(feature)[index_of(l)];
  }
  Table& mutable_table(std::size_t feature, ClassLabel l) {
    return tables_.at(feature)[index_of(l)];
  }
  double prob(std::size_t feature, std::size_t bin, ClassLabel l) const;

  /// Throws OutOfRangeError if the vector does not fit the tables.
  void check_bins(const BinVector& bins) const;

  /// Largest deviation of any conditional vector's sum from 1, and whether
  /// every entry lies in (0, 1].
  double max_normalization_error() const;
  bool entries_in_unit_interval() const;

  friend bool operator==(const CptModel&, const CptModel&) = default;

 private:
  Discretizer disc_;
  std::array<double, kNumClasses> priors_{};
  std::vector<std::array<Table, kNumClasses>> tables_;
  double laplace_alpha_ = 1.0;
};

/// Priors from class frequencies; entries (count + a) / (class_count + a * B).
CptModel fit_cpt(const BinnedDataset& train, double laplace_alpha);

}  // namespace ftwnb
