#include "ftwnb/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "ftwnb/error.hpp"

namespace ftwnb {

Discretizer::Discretizer(std::vector<std::vector<double>> edges) : edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    for (std::size_t j = 1; j < e.size(); ++j) {
      if (!(e[j - 1] < e[j])) {
        throw ConfigError("bin edges of feature " + std::to_string(i) +
                          " are not strictly increasing");
      }
    }
  }
}

std::size_t Discretizer::bin_of(std::size_t feature, double value) const {
  const auto& e = edges_.at(feature);
  return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), value) - e.begin());
}

BinVector Discretizer::discretize(const FeatureVector& fv) const {
  if (fv.size() != edges_.size()) {
    throw SchemaMismatchError("feature vector has " + std::to_string(fv.size()) +
                              " values, discretizer expects " + std::to_string(edges_.size()));
  }
  BinVector out(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) out[i] = bin_of(i, fv[i]);
  return out;
}

Discretizer fit_bins(const Dataset& train, std::size_t n_bins) {
  if (train.empty()) throw InsufficientSamplesError("cannot fit bins on an empty dataset");
  if (n_bins == 0) throw ConfigError("n_bins must be at least 1");
  const auto n = train.size();
  std::vector<std::vector<double>> edges(train.num_features());
  for (std::size_t i = 0; i < train.num_features(); ++i) {
    auto values = train.column(i);
    std::sort(values.begin(), values.end());
    auto& e = edges[i];
    for (std::size_t j = 1; j < n_bins; ++j) {
      // Cut at the order statistic with roughly j/n_bins of the data below it.
      const double cut = values[(j * n) / n_bins];
      if (cut > values.front() && (e.empty() || cut > e.back())) e.push_back(cut);
    }
  }
  return Discretizer(std::move(edges));
}

std::vector<std::size_t> BinnedDataset::column(std::size_t feature) const {
  std::vector<std::size_t> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back(b[feature]);
  return out;
}

BinnedDataset bin_dataset(const Discretizer& disc, const Dataset& d) {
  BinnedDataset out;
  out.discretizer = disc;
  out.bins.reserve(d.size());
  out.labels.reserve(d.size());
  for (const auto& s : d.samples()) {
    out.bins.push_back(disc.discretize(s.features));
    out.labels.push_back(s.label);
  }
  return out;
}

CptModel::CptModel(Discretizer disc, std::array<double, kNumClasses> priors,
                   std::vector<std::array<Table, kNumClasses>> tables, double laplace_alpha)
    : disc_(std::move(disc)),
      priors_(priors),
      tables_(std::move(tables)),
      laplace_alpha_(laplace_alpha) {
  if (tables_.size() != disc_.num_features()) {
    throw SchemaMismatchError("CPT has " + std::to_string(tables_.size()) +
                              " features, discretizer has " +
                              std::to_string(disc_.num_features()));
  }
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    for (const auto& t : tables_[i]) {
      if (t.size() != disc_.num_bins(i)) {
        throw SchemaMismatchError("CPT for feature " + std::to_string(i) + " has " +
                                  std::to_string(t.size()) + " bins, discretizer has " +
                                  std::to_string(disc_.num_bins(i)));
      }
    }
  }
}

double CptModel::prob(std::size_t feature, std::size_t bin, ClassLabel l) const {
  const auto& t = table(feature, l);
  if (bin >= t.size()) {
    throw OutOfRangeError("bin " + std::to_string(bin) + " out of range for feature " +
                          std::to_string(feature));
  }
  return t[bin];
}

void CptModel::check_bins(const BinVector& bins) const {
  if (bins.size() != tables_.size()) {
    throw OutOfRangeError("bin vector has " + std::to_string(bins.size()) +
                          " entries, model has " + std::to_string(tables_.size()) + " features");
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i] >= tables_[i][0].size()) {
      throw OutOfRangeError("bin " + std::to_string(bins[i]) + " out of range for feature " +
                            std::to_string(i));
    }
  }
}

double CptModel::max_normalization_error() const {
  double worst = 0.0;
  for (const auto& per_class : tables_) {
    for (const auto& t : per_class) {
      double sum = 0.0;
      for (double p : t) sum += p;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

bool CptModel::entries_in_unit_interval() const {
  for (const auto& per_class : tables_) {
    for (const auto& t : per_class) {
      for (double p : t) {
        if (!(p > 0.0 && p <= 1.0)) return false;
      }
    }
  }
  return true;
}

CptModel fit_cpt(const BinnedDataset& train, double laplace_alpha) {
  if (!(laplace_alpha > 0.0)) throw ConfigError("laplace alpha must be positive");
  std::array<std::size_t, kNumClasses> class_counts{};
  for (auto l : train.labels) ++class_counts[index_of(l)];
  for (auto l : {ClassLabel::Los, ClassLabel::Nlos}) {
    if (class_counts[index_of(l)] == 0) {
      throw MissingClassError("class " + std::string(to_string(l)) + " absent from training data");
    }
  }
  const auto total = static_cast<double>(train.size());
  const std::array<double, kNumClasses> priors{
      static_cast<double>(class_counts[0]) / total,
      static_cast<double>(class_counts[1]) / total};

  const auto& disc = train.discretizer;
  std::vector<std::array<CptModel::Table, kNumClasses>> tables(disc.num_features());
  for (std::size_t i = 0; i < disc.num_features(); ++i) {
    const auto n_bins = disc.num_bins(i);
    std::array<std::vector<std::size_t>, kNumClasses> counts;
    for (auto& c : counts) c.assign(n_bins, 0);
    for (std::size_t k = 0; k < train.size(); ++k) {
      ++counts[index_of(train.labels[k])].at(train.bins[k][i]);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double denom =
          static_cast<double>(class_counts[c]) + laplace_alpha * static_cast<double>(n_bins);
      auto& t = tables[i][c];
      t.resize(n_bins);
      for (std::size_t b = 0; b < n_bins; ++b) {
        t[b] = (static_cast<double>(counts[c][b]) + laplace_alpha) / denom;
      }
    }
  }
  return CptModel(disc, priors, std::move(tables), laplace_alpha);
}

}  // namespace ftwnb
