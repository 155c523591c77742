#include "ftwnb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "ftwnb/error.hpp"

namespace ftwnb {

namespace {

constexpr std::string_view kLabelColumn = "NLOS";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Explicit Fisher-Yates; std::shuffle's draw sequence is unspecified.
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
  return idx;
}

}  // namespace

std::string_view to_string(ClassLabel l) noexcept {
  return l == ClassLabel::Los ? "LOS" : "NLOS";
}

const Schema& default_schema() {
  static const Schema schema{"RANGE",       "RSS",       "FP_INDEX",   "F1_AMP",
                             "F2_AMP",      "F3_AMP",    "FPPL",       "RX_POWER",
                             "POWER_RATIO", "NOISE_STD", "MAX_NOISE",  "PREAMBLE_COUNT"};
  return schema;
}

Dataset::Dataset(Schema schema, std::vector<LabeledSample> samples)
    : schema_(std::move(schema)), samples_(std::move(samples)) {
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const auto& s = samples_[k];
    if (s.features.size() != schema_.size()) {
      throw SchemaMismatchError("sample " + std::to_string(k) + " has " +
                                std::to_string(s.features.size()) + " features, schema has " +
                                std::to_string(schema_.size()));
    }
    for (double v : s.features) {
      if (!std::isfinite(v)) {
        throw DomainError("sample " + std::to_string(k) + " has a non-finite feature value");
      }
    }
    ++counts_[index_of(s.label)];
  }
}

std::size_t Dataset::feature_index(std::string_view name) const {
  const auto it = std::find(schema_.begin(), schema_.end(), name);
  if (it == schema_.end()) {
    throw SchemaMismatchError("unknown feature column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - schema_.begin());
}

std::vector<ClassLabel> Dataset::labels() const {
  std::vector<ClassLabel> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

std::vector<double> Dataset::column(std::size_t feature) const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.features.at(feature));
  return out;
}

Dataset read_dataset(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatchError("missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_csv_line(line);
  // Report the first column that disagrees with the schema by name.
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i >= header.size() || header[i] != schema[i]) {
      const bool present = std::find(header.begin(), header.end(), schema[i]) != header.end();
      if (!present) throw SchemaMismatchError("missing column '" + schema[i] + "'");
      throw SchemaMismatchError("column '" + schema[i] + "' out of order (expected at position " +
                                std::to_string(i) + ")");
    }
  }
  if (header.size() == schema.size()) {
    throw SchemaMismatchError("missing column '" + std::string(kLabelColumn) + "'");
  }
  if (header[schema.size()] != kLabelColumn) {
    throw SchemaMismatchError("unexpected column '" + std::string(header[schema.size()]) + "'");
  }
  if (header.size() > schema.size() + 1) {
    throw SchemaMismatchError("unexpected column '" + std::string(header[schema.size() + 1]) +
                              "'");
  }

  std::vector<LabeledSample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != schema.size() + 1) {
      throw ParseError("expected " + std::to_string(schema.size() + 1) + " cells, found " +
                           std::to_string(cells.size()),
                       row);
    }
    LabeledSample s;
    s.features.resize(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (!parse_double(cells[i], s.features[i]) || !std::isfinite(s.features[i])) {
        throw ParseError("non-numeric value '" + std::string(cells[i]) + "' in column '" +
                             schema[i] + "'",
                         row);
      }
    }
    const auto label = cells.back();
    if (label == "0") {
      s.label = ClassLabel::Los;
    } else if (label == "1") {
      s.label = ClassLabel::Nlos;
    } else {
      throw ParseError("label '" + std::string(label) + "' is not 0 or 1", row);
    }
    samples.push_back(std::move(s));
  }
  return Dataset(schema, std::move(samples));
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_dataset(in, schema);
}

FeatureRows load_feature_rows(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  const auto cells = split_csv_line(header);
  const bool labeled = !cells.empty() && cells.back() == kLabelColumn;
  FeatureRows out;
  if (labeled) {
    in.seekg(0);
    const auto d = read_dataset(in, schema);
    for (const auto& s : d.samples()) out.rows.push_back(s.features);
    out.labels = d.labels();
    return out;
  }
  // Unlabeled: reuse the labeled parser by appending a dummy label column.
  std::ostringstream patched;
  patched << header << ',' << kLabelColumn << '\n';
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) patched << line << ",0\n";
  }
  std::istringstream replay(patched.str());
  const auto d = read_dataset(replay, schema);
  for (const auto& s : d.samples()) out.rows.push_back(s.features);
  return out;
}

void write_dataset(const Dataset& d, std::ostream& out) {
  for (const auto& name : d.schema()) out << name << ',';
  out << kLabelColumn << '\n';
  for (const auto& s : d.samples()) {
    for (double v : s.features) out << format_double(v) << ',';
    out << (s.label == ClassLabel::Nlos ? '1' : '0') << '\n';
  }
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_dataset(d, out);
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Schema schema;
  std::string line;
  while (std::getline(in, line)) {
    auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    for (auto cell : split_csv_line(body)) {
      if (!cell.empty()) schema.emplace_back(cell);
    }
  }
  if (schema.empty()) throw SchemaMismatchError("schema file " + path.string() + " is empty");
  return schema;
}

Dataset subsample_ratio(const Dataset& d, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("ratio must lie in (0, 1]");
  const auto wanted =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(d.count(ClassLabel::Los))));
  const std::size_t available = d.count(ClassLabel::Nlos);
  if (wanted > available) {
    throw InsufficientSamplesError("ratio " + std::to_string(ratio) + " needs " +
                                   std::to_string(wanted) + " NLoS samples, only " +
                                   std::to_string(available) + " available");
  }

  std::vector<std::size_t> nlos_positions;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k].label == ClassLabel::Nlos) nlos_positions.push_back(k);
  }
  std::mt19937_64 rng(seed);
  const auto order = shuffled_indices(nlos_positions.size(), rng);
  std::vector<bool> keep(d.size(), true);
  for (std::size_t j = wanted; j < order.size(); ++j) keep[nlos_positions[order[j]]] = false;

  std::vector<LabeledSample> out;
  out.reserve(d.count(ClassLabel::Los) + wanted);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (keep[k]) out.push_back(d[k]);
  }
  return Dataset(d.schema(), std::move(out));
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double test_fraction,
                                             std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw EmptySplitError("test fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(d.size(), false);

  auto assign = [&](const std::vector<std::size_t>& members, const std::string& what) {
    const auto n = members.size();
    const auto n_test =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test == n) {
      throw EmptySplitError("test fraction " + std::to_string(test_fraction) + " leaves " + what +
                            " with an empty side (" + std::to_string(n) + " samples)");
    }
    const auto order = shuffled_indices(n, rng);
    for (std::size_t j = 0; j < n_test; ++j) in_test[members[order[j]]] = true;
  };

  if (stratified) {
    for (auto label : {ClassLabel::Los, ClassLabel::Nlos}) {
      if (d.count(label) < 2) {
        throw InsufficientSamplesError("stratified split needs at least 2 " +
                                       std::string(to_string(label)) + " samples");
      }
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k].label == label) members.push_back(k);
      }
      assign(members, "class " + std::string(to_string(label)));
    }
  } else {
    std::vector<std::size_t> all(d.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    assign(all, "the dataset");
  }

  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  for (std::size_t k = 0; k < d.size(); ++k) (in_test[k] ? test : train).push_back(d[k]);
  return {Dataset(d.schema(), std::move(train)), Dataset(d.schema(), std::move(test))};
}

Dataset select_features(const Dataset& d, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(d.feature_index(n));
  std::vector<LabeledSample> out;
  out.reserve(d.size());
  for (const auto& s : d.samples()) {
    LabeledSample p;
    p.label = s.label;
    p.features.reserve(idx.size());
    for (auto i : idx) p.features.push_back(s.features[i]);
    out.push_back(std::move(p));
  }
  return Dataset(names, std::move(out));
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.schema() != b.schema()) throw SchemaMismatchError("cannot concatenate: schemas differ");
  auto samples = a.samples();
  samples.insert(samples.end(), b.samples().begin(), b.samples().end());
  return Dataset(a.schema(), std::move(samples));
}

}  // namespace ftwnb
