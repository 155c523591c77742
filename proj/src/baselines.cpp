#include "ftwnb/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

Prediction vote(std::size_t nlos, std::size_t total) {
  Prediction p;
  p.score = total == 0 ? 0.0 : static_cast<double>(nlos) / static_cast<double>(total);
  p.label = 2 * nlos > total ? ClassLabel::Nlos : ClassLabel::Los;
  const double eps = 1e-12;
  p.log_joint = {std::log(1.0 - p.score + eps), std::log(p.score + eps)};
  return p;
}

double gini(std::size_t nlos, std::size_t total) {
  if (total == 0) return 0.0;
  const double q = static_cast<double>(nlos) / static_cast<double>(total);
  return 2.0 * q * (1.0 - q);
}

}  // namespace

KnnClassifier::KnnClassifier(const Dataset& train, std::size_t k) : k_(k) {
  if (train.empty()) throw InsufficientSamplesError("KNN needs a non-empty training set");
  if (k == 0 || k > train.size()) {
    throw OutOfRangeError("KNN k=" + std::to_string(k) + " exceeds training size " +
                          std::to_string(train.size()));
  }
  const auto p = train.num_features();
  const auto n = static_cast<double>(train.size());
  mean_.assign(p, 0.0);
  scale_.assign(p, 0.0);
  for (const auto& s : train.samples()) {
    for (std::size_t i = 0; i < p; ++i) mean_[i] += s.features[i];
  }
  for (auto& m : mean_) m /= n;
  for (const auto& s : train.samples()) {
    for (std::size_t i = 0; i < p; ++i) {
      const double d = s.features[i] - mean_[i];
      scale_[i] += d * d;
    }
  }
  for (auto& v : scale_) {
    v = std::sqrt(v / n);
    if (!(v > 0.0)) v = 1.0;
  }
  points_.reserve(train.size());
  for (const auto& s : train.samples()) {
    points_.push_back(standardize(s.features));
    labels_.push_back(s.label);
  }
}

std::vector<double> KnnClassifier::standardize(const FeatureVector& fv) const {
  if (fv.size() != mean_.size()) throw SchemaMismatchError("KNN feature count mismatch");
  std::vector<double> z(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) z[i] = (fv[i] - mean_[i]) / scale_[i];
  return z;
}

Prediction KnnClassifier::predict(const FeatureVector& fv) const {
  const auto z = standardize(fv);
  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (std::size_t j = 0; j < points_.size(); ++j) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = z[i] - points_[j][i];
      d2 += d * d;
    }
    dist[j] = {d2, j};
  }
  // Pairs compare by (distance, index), which encodes the tie rule.
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
  std::size_t nlos = 0;
  for (std::size_t j = 0; j < k_; ++j) nlos += labels_[dist[j].second] == ClassLabel::Nlos;
  return vote(nlos, k_);
}

DecisionTree::DecisionTree(const Dataset& train, std::size_t max_depth)
    : num_features_(train.num_features()) {
  if (train.empty()) throw InsufficientSamplesError("decision tree needs a non-empty training set");
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  build(train, idx, 0, max_depth);
}

std::size_t DecisionTree::build(const Dataset& train, std::vector<std::size_t>& idx,
                                std::size_t depth, std::size_t max_depth) {
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  depth_ = std::max(depth_, depth);

  std::size_t nlos = 0;
  for (auto k : idx) nlos += train[k].label == ClassLabel::Nlos;
  const auto n = idx.size();
  nodes_[id].nlos_fraction = static_cast<double>(nlos) / static_cast<double>(n);
  if (depth >= max_depth || nlos == 0 || nlos == n) return id;

  const double parent = gini(nlos, n);
  double best_gain = 0.0;
  std::size_t best_feature = 0;
  double best_threshold = 0.0;
  bool found = false;
  std::vector<std::pair<double, bool>> column(n);
  for (std::size_t f = 0; f < num_features_; ++f) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& s = train[idx[j]];
      column[j] = {s.features[f], s.label == ClassLabel::Nlos};
    }
    std::sort(column.begin(), column.end());
    std::size_t left_nlos = 0;
    for (std::size_t j = 1; j < n; ++j) {
      left_nlos += column[j - 1].second;
      if (column[j - 1].first == column[j].first) continue;
      const double wl = static_cast<double>(j) / static_cast<double>(n);
      const double child = wl * gini(left_nlos, j) + (1.0 - wl) * gini(nlos - left_nlos, n - j);
      const double gain = parent - child;
      if (gain > best_gain + 1e-15) {
        best_gain = gain;
        best_feature = f;
        best_threshold = 0.5 * (column[j - 1].first + column[j].first);
        found = true;
      }
    }
  }
  if (!found) return id;

  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (auto k : idx) {
    (train[k].features[best_feature] < best_threshold ? left : right).push_back(k);
  }
  nodes_[id].leaf = false;
  nodes_[id].feature = best_feature;
  nodes_[id].threshold = best_threshold;
  const auto l = build(train, left, depth + 1, max_depth);
  const auto r = build(train, right, depth + 1, max_depth);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

Prediction DecisionTree::predict(const FeatureVector& fv) const {
  if (fv.size() != num_features_) throw SchemaMismatchError("tree feature count mismatch");
  std::size_t at = 0;
  while (!nodes_[at].leaf) {
    const auto& node = nodes_[at];
    at = fv[node.feature] < node.threshold ? node.left : node.right;
  }
  const double q = nodes_[at].nlos_fraction;
  Prediction p;
  p.score = q;
  p.label = q > 0.5 ? ClassLabel::Nlos : ClassLabel::Los;
  const double eps = 1e-12;
  p.log_joint = {std::log(1.0 - q + eps), std::log(q + eps)};
  return p;
}

std::vector<Prediction> baseline_predict(BaselineKind kind, const Dataset& train,
                                         const Dataset& test, const BaselineParams& params) {
  if (train.schema() != test.schema()) {
    throw SchemaMismatchError("train and test schemas differ");
  }
  std::vector<Prediction> out;
  out.reserve(test.size());
  if (kind == BaselineKind::Knn) {
    const KnnClassifier knn(train, params.k);
    for (const auto& s : test.samples()) out.push_back(knn.predict(s.features));
  } else {
    const DecisionTree tree(train, params.max_depth);
    for (const auto& s : test.samples()) out.push_back(tree.predict(s.features));
  }
  return out;
}

}  // namespace ftwnb
