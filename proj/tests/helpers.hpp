#pragma once

#include <random>
#include <vector>

#include "ftwnb/classifiers.hpp"
#include "ftwnb/dataset.hpp"

namespace testing_util {

using namespace ftwnb;

inline Dataset make_dataset(const Schema& schema, const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels) {
  std::vector<LabeledSample> samples;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    samples.push_back({rows[k], labels[k] ? ClassLabel::Nlos : ClassLabel::Los});
  }
  return Dataset(schema, std::move(samples));
}

inline Schema numbered_schema(std::size_t n) {
  Schema s;
  for (std::size_t i = 0; i < n; ++i) s.push_back("f" + std::to_string(i));
  return s;
}

// Random CPT over `bins_per_feature` with strictly positive entries.
inline CptModel random_cpt(const std::vector<std::size_t>& bins_per_feature, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> edges;
  std::vector<std::array<CptModel::Table, kNumClasses>> tables;
  for (auto b : bins_per_feature) {
    std::vector<double> e;
    for (std::size_t j = 1; j < b; ++j) e.push_back(static_cast<double>(j));
    edges.push_back(e);
    std::array<CptModel::Table, kNumClasses> t;
    for (auto& v : t) {
      v.resize(b);
      double sum = 0.0;
      for (auto& x : v) sum += (x = u(rng));
      for (auto& x : v) x /= sum;
    }
    tables.push_back(t);
  }
  const double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
  return CptModel(Discretizer(edges), {p, 1.0 - p}, tables, 1.0);
}

}  // namespace testing_util
