#include "ftwnb/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ftwnb/error.hpp"

namespace ftwnb {

double mutual_information(std::span<const std::size_t> x, std::span<const std::size_t> y) {
  if (x.size() != y.size()) {
    throw LengthMismatchError("mutual information over columns of length " +
                              std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.empty()) throw LengthMismatchError("mutual information needs at least one sample");

  // Dense joint table when the alphabets are small (the usual case for bins),
  // sparse otherwise.
  const std::size_t nx = *std::max_element(x.begin(), x.end()) + 1;
  const std::size_t ny = *std::max_element(y.begin(), y.end()) + 1;
  const auto n = static_cast<double>(x.size());
  std::vector<double> px(nx, 0.0);
  std::vector<double> py(ny, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    px[x[k]] += 1.0;
    py[y[k]] += 1.0;
  }

  double mi = 0.0;
  auto accumulate = [&](std::size_t a, std::size_t b, double count) {
    mi += (count / n) * std::log(count * n / (px[a] * py[b]));
  };
  if (nx * ny <= (std::size_t{1} << 20)) {
    std::vector<double> joint(nx * ny, 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) joint[x[k] * ny + y[k]] += 1.0;
    for (std::size_t a = 0; a < nx; ++a) {
      for (std::size_t b = 0; b < ny; ++b) {
        if (joint[a * ny + b] > 0.0) accumulate(a, b, joint[a * ny + b]);
      }
    }
  } else {
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    for (std::size_t k = 0; k < x.size(); ++k) joint[{x[k], y[k]}] += 1.0;
    for (const auto& [ab, count] : joint) accumulate(ab.first, ab.second, count);
  }
  return std::max(mi, 0.0);
}

double mutual_information(std::span<const std::size_t> x_bins,
                          std::span<const ClassLabel> labels) {
  std::vector<std::size_t> y(labels.size());
  std::transform(labels.begin(), labels.end(), y.begin(),
                 [](ClassLabel l) { return index_of(l); });
  return mutual_information(x_bins, std::span<const std::size_t>(y));
}

CorrelationMatrix correlation_matrix(const Dataset& d) {
  const auto p = d.num_features();
  CorrelationMatrix out{p, std::vector<double>(p * p, 0.0)};
  const auto n = d.size();
  std::vector<std::vector<double>> centered(p);
  std::vector<double> norm(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    centered[i] = d.column(i);
    double mean = 0.0;
    for (double v : centered[i]) mean += v;
    mean /= static_cast<double>(std::max<std::size_t>(n, 1));
    for (double& v : centered[i]) {
      v -= mean;
      norm[i] += v * v;
    }
    norm[i] = std::sqrt(norm[i]);
  }
  for (std::size_t i = 0; i < p; ++i) {
    out.values[i * p + i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      double r = 0.0;
      if (norm[i] > 0.0 && norm[j] > 0.0) {
        for (std::size_t k = 0; k < n; ++k) r += centered[i][k] * centered[j][k];
        r = std::clamp(r / (norm[i] * norm[j]), -1.0, 1.0);
      }
      out.values[i * p + j] = r;
      out.values[j * p + i] = r;
    }
  }
  return out;
}

std::vector<double> class_relevance(const BinnedDataset& d) {
  std::vector<double> mi(d.num_features());
  for (std::size_t i = 0; i < mi.size(); ++i) {
    const auto col = d.column(i);
    mi[i] = mutual_information(std::span<const std::size_t>(col),
                               std::span<const ClassLabel>(d.labels));
  }
  return mi;
}

std::vector<std::size_t> mrmr_select(const BinnedDataset& d, std::size_t k) {
  const auto p = d.num_features();
  if (k < 1 || k > p) {
    throw OutOfRangeError("mRMR k=" + std::to_string(k) + " outside [1, " + std::to_string(p) +
                          "]");
  }
  const auto relevance = class_relevance(d);
  std::vector<std::vector<std::size_t>> columns(p);
  for (std::size_t i = 0; i < p; ++i) columns[i] = d.column(i);

  std::vector<std::size_t> selected;
  std::vector<bool> taken(p, false);
  std::vector<double> redundancy_sum(p, 0.0);
  while (selected.size() < k) {
    std::size_t best = p;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < p; ++f) {
      if (taken[f]) continue;
      double score = relevance[f];
      if (!selected.empty()) score -= redundancy_sum[f] / static_cast<double>(selected.size());
      if (score > best_score) {
        best_score = score;
        best = f;
      }
    }
    selected.push_back(best);
    taken[best] = true;
    for (std::size_t f = 0; f < p; ++f) {
      if (!taken[f]) redundancy_sum[f] += mutual_information(columns[f], columns[best]);
    }
  }
  return selected;
}

AttributeWeights attribute_weights(const BinnedDataset& d, double floor) {
  if (!(floor > 0.0)) throw ConfigError("weight floor must be positive");
  bool seen[kNumClasses] = {false, false};
  for (auto l : d.labels) seen[index_of(l)] = true;
  if (!seen[0] || !seen[1]) throw MissingClassError("attribute weights need both classes");

  auto raw = class_relevance(d);
  double mean = 0.0;
  for (double& r : raw) {
    r = std::max(r, floor);
    mean += r;
  }
  mean /= static_cast<double>(raw.size());
  for (double& r : raw) r /= mean;
  return {std::move(raw)};
}

}  // namespace ftwnb
