#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ftwnb/discretize.hpp"
#include "ftwnb/error.hpp"
#include "ftwnb/features.hpp"
#include "ftwnb/synth.hpp"
#include "helpers.hpp"

using namespace ftwnb;
using testing_util::make_dataset;

namespace {

// Direct double sum over the joint table.
double mi_oracle(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  const double n = static_cast<double>(x.size());
  const auto nx = *std::max_element(x.begin(), x.end()) + 1;
  const auto ny = *std::max_element(y.begin(), y.end()) + 1;
  std::vector<double> joint(nx * ny, 0.0), px(nx, 0.0), py(ny, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    joint[x[k] * ny + y[k]] += 1.0 / n;
    px[x[k]] += 1.0 / n;
    py[y[k]] += 1.0 / n;
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      const double p = joint[a * ny + b];
      if (p > 0) mi += p * std::log(p / (px[a] * py[b]));
    }
  }
  return mi;
}

BinnedDataset binned_from(const std::vector<std::vector<std::size_t>>& cols,
                          const std::vector<ClassLabel>& labels) {
  BinnedDataset b;
  std::vector<std::vector<double>> edges;
  for (const auto& c : cols) {
    const auto top = *std::max_element(c.begin(), c.end());
    std::vector<double> e;
    for (std::size_t j = 1; j <= top; ++j) e.push_back(static_cast<double>(j));
    edges.push_back(e);
  }
  b.discretizer = Discretizer(edges);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    BinVector row;
    for (const auto& c : cols) row.push_back(c[k]);
    b.bins.push_back(row);
  }
  b.labels = labels;
  return b;
}

}  // namespace

TEST_CASE("mutual information basics") {
  const std::vector<std::size_t> constant(8, 0);
  const std::vector<std::size_t> balanced{0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(mutual_information(constant, balanced) == doctest::Approx(0.0));
  CHECK(mutual_information(balanced, balanced) == doctest::Approx(std::log(2.0)));
  const std::vector<std::size_t> short_col{0, 1};
  CHECK_THROWS_AS(mutual_information(short_col, balanced), LengthMismatchError);
}

TEST_CASE("2x2 joint against the double sum") {
  std::vector<std::size_t> x;
  std::vector<ClassLabel> l;
  std::vector<std::size_t> y;
  auto add = [&](std::size_t bin, ClassLabel c, int n) {
    for (int k = 0; k < n; ++k) {
      x.push_back(bin);
      l.push_back(c);
      y.push_back(index_of(c));
    }
  };
  add(0, ClassLabel::Los, 40);
  add(0, ClassLabel::Nlos, 10);
  add(1, ClassLabel::Los, 10);
  add(1, ClassLabel::Nlos, 40);
  const double oracle = mi_oracle(x, y);
  CHECK(mutual_information(x, l) == doctest::Approx(oracle).epsilon(1e-12));
  const double closed = 0.8 * std::log(1.6) + 0.2 * std::log(0.4);
  CHECK(oracle == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("MI symmetry and random agreement with oracle") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 5 + rng() % 100;
    std::vector<std::size_t> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = rng() % 4;
      b[k] = (a[k] + rng() % 3) % 5;
    }
    CHECK(mutual_information(a, b) == doctest::Approx(mutual_information(b, a)).epsilon(1e-12));
    CHECK(mutual_information(a, b) == doctest::Approx(mi_oracle(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("shuffled labels carry almost no information") {
  const auto d = generate_samples(builtin_scenario("studio"), 500, 500, 4);
  const auto binned = bin_dataset(fit_bins(d, 10), d);
  std::mt19937_64 rng(11);
  double total = 0.0;
  const int shuffles = 50;
  for (int s = 0; s < shuffles; ++s) {
    auto labels = binned.labels;
    std::shuffle(labels.begin(), labels.end(), rng);
    double mean = 0.0;
    for (std::size_t i = 0; i < binned.num_features(); ++i) {
      mean += mutual_information(binned.column(i), labels);
    }
    total += mean / static_cast<double>(binned.num_features());
  }
  CHECK(total / shuffles < 0.05);
}

TEST_CASE("correlation matrix") {
  const auto d = make_dataset({"a", "b", "c", "k"},
                              {{1, 1, 3, 5}, {2, 2, 1, 5}, {3, 3, 2, 5}, {4, 4, 0, 5}},
                              {0, 1, 0, 1});
  const auto c = correlation_matrix(d);
  for (std::size_t i = 0; i < 4; ++i) CHECK(c(i, i) == doctest::Approx(1.0));
  CHECK(c(0, 1) == doctest::Approx(1.0));
  CHECK(c(3, 0) == 0.0);
  CHECK(c(0, 2) == doctest::Approx(c(2, 0)));
}

TEST_CASE("mRMR") {
  std::mt19937_64 rng(5);
  const std::size_t n = 400;
  std::vector<ClassLabel> labels(n);
  std::vector<std::size_t> strong(n), weak(n), noise(n);
  for (std::size_t k = 0; k < n; ++k) {
    labels[k] = k % 2 ? ClassLabel::Nlos : ClassLabel::Los;
    strong[k] = (rng() % 10 < 9) ? index_of(labels[k]) : 1 - index_of(labels[k]);
    weak[k] = (rng() % 10 < 7) ? index_of(labels[k]) : 1 - index_of(labels[k]);
    noise[k] = rng() % 3;
  }
  const auto b = binned_from({noise, strong, weak, strong}, labels);

  SUBCASE("k = 1 is the arg max of class MI") {
    const auto rel = class_relevance(b);
    const auto best = static_cast<std::size_t>(std::max_element(rel.begin(), rel.end()) - rel.begin());
    CHECK(mrmr_select(b, 1) == std::vector<std::size_t>{best});
    CHECK(best == 1);
  }
  SUBCASE("duplicate of the first pick is not second") {
    const auto sel = mrmr_select(b, 2);
    CHECK(sel[0] == 1);
    CHECK(sel[1] != 3);
    CHECK(sel[1] == 2);
  }
  SUBCASE("k = p is a permutation") {
    auto sel = mrmr_select(b, 4);
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<std::size_t>{0, 1, 2, 3});
  }
  SUBCASE("bad k") {
    CHECK_THROWS_AS(mrmr_select(b, 0), OutOfRangeError);
    CHECK_THROWS_AS(mrmr_select(b, 5), OutOfRangeError);
  }
}

TEST_CASE("attribute weights") {
  std::vector<ClassLabel> labels;
  std::vector<std::size_t> inf, dead;
  for (std::size_t k = 0; k < 100; ++k) {
    labels.push_back(k % 2 ? ClassLabel::Nlos : ClassLabel::Los);
    inf.push_back(k % 2 == 0 || k % 10 == 1 ? 0 : 1);
    dead.push_back(0);
  }
  SUBCASE("identical copies get weight 1") {
    const auto w = attribute_weights(binned_from({inf, inf, inf}, labels));
    for (auto v : w.w) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("zero-MI feature gets floor over mean raw") {
    const auto b = binned_from({inf, dead, inf}, labels);
    const double mi = mutual_information(inf, labels);
    const double mean_raw = (2.0 * mi + kDefaultWeightFloor) / 3.0;
    const auto w = attribute_weights(b);
    CHECK(w[1] == doctest::Approx(kDefaultWeightFloor / mean_raw));
    CHECK(w[1] > 0.0);
    CHECK(w[0] == doctest::Approx(mi / mean_raw));
  }
  SUBCASE("column order only permutes weights") {
    const auto a = attribute_weights(binned_from({inf, dead}, labels));
    const auto r = attribute_weights(binned_from({dead, inf}, labels));
    CHECK(a[0] == doctest::Approx(r[1]));
    CHECK(a[1] == doctest::Approx(r[0]));
  }
}
