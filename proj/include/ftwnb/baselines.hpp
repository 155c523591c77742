#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ftwnb/classifiers.hpp"
#include "ftwnb/dataset.hpp"

namespace ftwnb {

/// k-nearest-neighbour vote on features z-scored with training statistics.
/// Equal distances rank the lower training index first; a tied vote goes to
/// LoS. The score is the NLoS fraction among the k neighbours.
class KnnClassifier {
 public:
  KnnClassifier(const Dataset& train, std::size_t k);

  Prediction predict(const FeatureVector& fv) const;
  std::size_t k() const noexcept { return k_; }

 private:
  std::vector<double> standardize(const FeatureVector& fv) const;

  std::size_t k_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<std::vector<double>> points_;
  std::vector<ClassLabel> labels_;
};

/// CART-style binary tree on axis-aligned thresholds with Gini impurity.
/// Samples with x < threshold go left. Leaves predict their majority class
/// (ties to LoS) and score the leaf's NLoS fraction.
class DecisionTree {
 public:
  DecisionTree(const Dataset& train, std::size_t max_depth);

  Prediction predict(const FeatureVector& fv) const;
  std::size_t depth() const noexcept { return depth_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    double nlos_fraction = 0.0;
  };

  std::size_t build(const Dataset& train, std::vector<std::size_t>& idx, std::size_t depth,
                    std::size_t max_depth);

  std::size_t num_features_ = 0;
  std::size_t depth_ = 0;
  std::vector<Node> nodes_;
};

enum class BaselineKind { Knn, DecisionTree };

struct BaselineParams {
  std::size_t k = 5;
  std::size_t max_depth = 6;
};

std::vector<Prediction> baseline_predict(BaselineKind kind, const Dataset& train,
                                         const Dataset& test, const BaselineParams& params);

}  // namespace ftwnb
