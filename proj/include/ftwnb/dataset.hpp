#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ftwnb {

enum class ClassLabel : std::uint8_t { Los = 0, Nlos = 1 };

inline constexpr std::size_t kNumClasses = 2;

constexpr std::size_t index_of(ClassLabel l) noexcept {
  return static_cast<std::size_t>(l);
}

constexpr ClassLabel other(ClassLabel l) noexcept {
  return l == ClassLabel::Los ? ClassLabel::Nlos : ClassLabel::Los;
}

std::string_view to_string(ClassLabel l) noexcept;

using FeatureVector = std::vector<double>;

struct LabeledSample {
  FeatureVector features;
  ClassLabel label = ClassLabel::Los;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

using Schema = std::vector<std::string>;

/// Default 12-feature UWB schema, in column order.
const Schema& default_schema();

/// Per-class sample counts, indexed by `index_of(ClassLabel)`.
using ClassCounts = std::array<std::size_t, kNumClasses>;

/// Immutable labeled dataset. Every sample is checked against the schema
/// length and for finite values at construction.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<LabeledSample> samples);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  const ClassCounts& counts() const noexcept { return counts_; }

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t num_features() const noexcept { return schema_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t count(ClassLabel l) const noexcept { return counts_[index_of(l)]; }

  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

  /// Index of a named feature; throws SchemaMismatchError if absent.
  std::size_t feature_index(std::string_view name) const;

  std::vector<ClassLabel> labels() const;
  std::vector<double> column(std::size_t feature) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Schema schema_;
  std::vector<LabeledSample> samples_;
  ClassCounts counts_{};
};

/// Reads a CSV with a header row whose feature columns must match `schema`
/// exactly (same names, same order) followed by an integer `NLOS` column.
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema);
Dataset read_dataset(std::istream& in, const Schema& schema);

/// Feature rows of a CSV whose trailing NLOS column is optional, for
/// prediction on unlabeled data. Labels, when present, are returned too.
struct FeatureRows {
  std::vector<FeatureVector> rows;
  std::optional<std::vector<ClassLabel>> labels;
};
FeatureRows load_feature_rows(const std::filesystem::path& path, const Schema& schema);

/// Writes the CSV form read by load_dataset. Values use the shortest
/// representation that parses back to the identical double.
void save_dataset(const Dataset& d, const std::filesystem::path& path);
void write_dataset(const Dataset& d, std::ostream& out);

/// Reads a feature-name list: one name per line, or a single
/// comma-separated line. Blank lines and `#` comments are skipped.
Schema load_schema(const std::filesystem::path& path);

/// Keeps every LoS sample and a uniform random subset of round(ratio * LoS)
/// NLoS samples, drawn without replacement. Original order is preserved.
Dataset subsample_ratio(const Dataset& d, double ratio, std::uint64_t seed);

/// Disjoint (train, test) partition. Relative order inside each side follows
/// the input order.
std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double test_fraction,
                                             std::uint64_t seed, bool stratified);

/// Projects the dataset onto the named features, in the given order.
Dataset select_features(const Dataset& d, const std::vector<std::string>& names);

/// Concatenates two datasets sharing a schema.
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace ftwnb
