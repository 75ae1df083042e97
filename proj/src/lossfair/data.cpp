/*
 * Copyright 2026 The lossfair Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lossfair/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "lossfair/error.hpp"

namespace lossfair {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// One CSV record; double quotes may wrap fields and "" escapes a quote.
std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(Trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(Trim(current));
  return fields;
}

bool Contains(const std::vector<std::string>& values, const std::string& v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

double ParseDouble(const std::string& text, const std::string& column,
                   std::size_t line_number) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    Fail(ErrorCode::kData, "line " + std::to_string(line_number) +
                               ": column '" + column +
                               "' is not a finite number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> StringOrList(const nlohmann::json& j,
                                      const std::string& what) {
  if (j.is_string()) return {j.get<std::string>()};
  if (j.is_number_integer()) return {std::to_string(j.get<long long>())};
  if (j.is_array()) {
    std::vector<std::string> out;
    for (const auto& item : j) {
      if (item.is_string()) {
        out.push_back(item.get<std::string>());
      } else if (item.is_number_integer()) {
        out.push_back(std::to_string(item.get<long long>()));
      } else {
        Fail(ErrorCode::kConfig, what + " entries must be strings");
      }
    }
    return out;
  }
  Fail(ErrorCode::kConfig, what + " must be a string or a list of strings");
}

}  // namespace

const char* BenefitKindName(BenefitKind kind) {
  return kind == BenefitKind::kAcceptanceRate ? "sp" : "eop";
}

BenefitKind ParseBenefitKind(const std::string& text) {
  if (text == "sp" || text == "ar" || text == "acceptance_rate") {
    return BenefitKind::kAcceptanceRate;
  }
  if (text == "eop" || text == "tpr" || text == "true_positive_rate") {
    return BenefitKind::kTruePositiveRate;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown benefit kind '" + text + "'");
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd labels,
                 Eigen::VectorXd sensitive, std::string name,
                 std::vector<std::string> feature_names,
                 std::vector<Index> numeric_columns)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      sensitive_(std::move(sensitive)),
      name_(std::move(name)),
      feature_names_(std::move(feature_names)),
      numeric_columns_(std::move(numeric_columns)) {
  const Index n = features_.rows();
  if (labels_.size() != n || sensitive_.size() != n) {
    Fail(ErrorCode::kData, "dataset: row count mismatch between features (" +
                               std::to_string(n) + "), labels (" +
                               std::to_string(labels_.size()) +
                               ") and sensitive (" +
                               std::to_string(sensitive_.size()) + ")");
  }
  if (features_.cols() < 1) {
    Fail(ErrorCode::kData, "dataset: feature matrix needs a bias column");
  }
  if (!features_.allFinite()) {
    Fail(ErrorCode::kData, "dataset: non-finite feature value");
  }
  for (Index i = 0; i < n; ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      Fail(ErrorCode::kData, "dataset: label at row " + std::to_string(i) +
                                 " is not +1/-1");
    }
    if (sensitive_[i] != 0.0 && sensitive_[i] != 1.0) {
      Fail(ErrorCode::kData, "dataset: sensitive value at row " +
                                 std::to_string(i) + " is not 0/1");
    }
    if (features_(i, features_.cols() - 1) != 1.0) {
      Fail(ErrorCode::kData, "dataset: last feature column is not the bias");
    }
  }
  if (feature_names_.empty()) {
    for (Index j = 0; j + 1 < features_.cols(); ++j) {
      feature_names_.push_back("x" + std::to_string(j + 1));
    }
    feature_names_.push_back("bias");
  }
  if (static_cast<Index>(feature_names_.size()) != features_.cols()) {
    Fail(ErrorCode::kData, "dataset: feature name count mismatch");
  }
  for (Index c : numeric_columns_) {
    if (c < 0 || c + 1 >= features_.cols()) {
      Fail(ErrorCode::kData, "dataset: numeric column index out of range");
    }
  }
}

Dataset Dataset::FromRaw(const Eigen::MatrixXd& raw_features,
                         Eigen::VectorXd labels, Eigen::VectorXd sensitive,
                         std::string name,
                         std::vector<std::string> feature_names,
                         std::vector<Index> numeric_columns) {
  Eigen::MatrixXd features(raw_features.rows(), raw_features.cols() + 1);
  features.leftCols(raw_features.cols()) = raw_features;
  features.col(raw_features.cols()).setOnes();
  if (!feature_names.empty()) feature_names.push_back("bias");
  return Dataset(std::move(features), std::move(labels), std::move(sensitive),
                 std::move(name), std::move(feature_names),
                 std::move(numeric_columns));
}

Dataset Dataset::Subset(std::span<const Index> rows) const {
  Eigen::MatrixXd f(static_cast<Index>(rows.size()), width());
  Eigen::VectorXd y(static_cast<Index>(rows.size()));
  Eigen::VectorXd z(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index r = rows[i];
    if (r < 0 || r >= this->rows()) {
      Fail(ErrorCode::kInvalidArgument, "subset: row index out of range");
    }
    f.row(static_cast<Index>(i)) = features_.row(r);
    y[static_cast<Index>(i)] = labels_[r];
    z[static_cast<Index>(i)] = sensitive_[r];
  }
  return Dataset(std::move(f), std::move(y), std::move(z), name_,
                 feature_names_, numeric_columns_);
}

Dataset Dataset::WithFeatures(Eigen::MatrixXd features) const {
  return Dataset(std::move(features), labels_, sensitive_, name_,
                 feature_names_, numeric_columns_);
}

Dataset Dataset::WithSwappedGroups() const {
  Eigen::VectorXd swapped = (1.0 - sensitive_.array()).matrix();
  return Dataset(features_, labels_, std::move(swapped), name_,
                 feature_names_, numeric_columns_);
}

std::vector<Index> Dataset::ConditioningRows(BenefitKind kind) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(rows()));
  for (Index i = 0; i < rows(); ++i) {
    if (kind == BenefitKind::kAcceptanceRate || labels_[i] > 0) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Index> Dataset::GroupRows(BenefitKind kind, int group) const {
  std::vector<Index> out;
  for (Index i = 0; i < rows(); ++i) {
    if (sensitive_[i] != static_cast<double>(group)) continue;
    if (kind == BenefitKind::kTruePositiveRate && labels_[i] < 0) continue;
    out.push_back(i);
  }
  return out;
}

Index Dataset::CountLabel(int label) const {
  return (labels_.array() == static_cast<double>(label)).count();
}

Index Dataset::CountGroup(int group) const {
  return (sensitive_.array() == static_cast<double>(group)).count();
}

// ---------------------------------------------------------------------------
// Schema

void CsvSchema::Validate() const {
  if (label_column.empty()) Fail(ErrorCode::kConfig, "schema: label column missing");
  if (sensitive_column.empty()) {
    Fail(ErrorCode::kConfig, "schema: sensitive column missing");
  }
  if (label_column == sensitive_column) {
    Fail(ErrorCode::kConfig, "schema: label and sensitive column coincide");
  }
  if (positive_labels.empty()) {
    Fail(ErrorCode::kConfig, "schema: no positive label value given");
  }
  if (protected_value.empty()) {
    Fail(ErrorCode::kConfig, "schema: no protected value given");
  }
  if (Contains(non_protected_values, protected_value)) {
    Fail(ErrorCode::kConfig, "schema: protected value listed as non-protected");
  }
  std::set<std::string> seen{label_column, sensitive_column};
  for (const auto* list : {&categorical_columns, &numeric_columns, &drop_columns}) {
    for (const auto& c : *list) {
      if (!seen.insert(c).second) {
        Fail(ErrorCode::kConfig, "schema: column '" + c +
                                     "' listed twice or collides with the "
                                     "label/sensitive column");
      }
    }
  }
}

CsvSchema SchemaFromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("schema: ") + e.what());
  }
  CsvSchema s;
  try {
    s.name = j.value("name", std::string("csv"));
    const auto& label = j.at("label");
    s.label_column = label.at("column").get<std::string>();
    s.positive_labels = StringOrList(label.at("positive"), "label.positive");
    const auto& sens = j.at("sensitive");
    s.sensitive_column = sens.at("column").get<std::string>();
    s.protected_value = StringOrList(sens.at("protected"), "sensitive.protected").at(0);
    if (sens.contains("non_protected")) {
      s.non_protected_values =
          StringOrList(sens.at("non_protected"), "sensitive.non_protected");
    }
    if (j.contains("categorical")) {
      s.categorical_columns = j.at("categorical").get<std::vector<std::string>>();
    }
    if (j.contains("numeric")) {
      s.numeric_columns = j.at("numeric").get<std::vector<std::string>>();
    }
    if (j.contains("drop")) s.drop_columns = j.at("drop").get<std::vector<std::string>>();
    if (j.contains("missing")) {
      s.missing_tokens = j.at("missing").get<std::vector<std::string>>();
    }
    const std::string standardize = j.value("standardize", std::string("full"));
    if (standardize == "full") {
      s.standardization = Standardization::kFullDataset;
    } else if (standardize == "none") {
      s.standardization = Standardization::kNone;
    } else {
      Fail(ErrorCode::kConfig, "schema: standardize must be 'full' or 'none'");
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("schema: ") + e.what());
  }
  s.Validate();
  return s;
}

CsvSchema LoadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open schema file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return SchemaFromJsonText(buffer.str());
}

// ---------------------------------------------------------------------------
// CSV ingestion

Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open data file " + path.string());
  return ParseCsv(in, schema);
}

Dataset ParseCsv(std::istream& in, const CsvSchema& schema) {
  schema.Validate();

  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kData, "csv: empty input");
  const std::vector<std::string> header = SplitCsvLine(line);
  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column_index.emplace(header[i], i).second) {
      Fail(ErrorCode::kData, "csv: duplicate header column '" + header[i] + "'");
    }
  }
  auto require = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) {
      Fail(ErrorCode::kData, "csv: unknown column '" + name + "'");
    }
    return it->second;
  };
  const std::size_t label_idx = require(schema.label_column);
  const std::size_t sens_idx = require(schema.sensitive_column);
  for (const auto& c : schema.categorical_columns) require(c);
  for (const auto& c : schema.numeric_columns) require(c);
  for (const auto& c : schema.drop_columns) require(c);

  enum class Role { kLabel, kSensitive, kNumeric, kCategorical, kDrop };
  std::vector<Role> roles(header.size(), Role::kDrop);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i];
    if (i == label_idx) {
      roles[i] = Role::kLabel;
    } else if (i == sens_idx) {
      roles[i] = Role::kSensitive;
    } else if (Contains(schema.numeric_columns, h)) {
      roles[i] = Role::kNumeric;
    } else if (Contains(schema.categorical_columns, h)) {
      roles[i] = Role::kCategorical;
    } else if (Contains(schema.drop_columns, h)) {
      roles[i] = Role::kDrop;
    } else {
      Fail(ErrorCode::kData, "csv: column '" + h + "' is not covered by the schema");
    }
  }

  // Keep raw strings for surviving rows; encoding needs the full level set.
  std::vector<std::vector<std::string>> kept;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      Fail(ErrorCode::kData, "csv: line " + std::to_string(line_number) +
                                 " has " + std::to_string(fields.size()) +
                                 " fields, header has " +
                                 std::to_string(header.size()));
    }
    bool missing = false;
    for (std::size_t i = 0; i < fields.size() && !missing; ++i) {
      if (roles[i] != Role::kDrop && Contains(schema.missing_tokens, fields[i])) {
        missing = true;
      }
    }
    if (missing) continue;
    const std::string& z = fields[sens_idx];
    if (!schema.non_protected_values.empty() && z != schema.protected_value &&
        !Contains(schema.non_protected_values, z)) {
      continue;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (roles[i] == Role::kNumeric) {
        ParseDouble(fields[i], header[i], line_number);
      }
    }
    kept.push_back(std::move(fields));
  }
  if (kept.empty()) Fail(ErrorCode::kData, "csv: no complete rows");

  // Column layout in header order: numerics take one column, categoricals one
  // per observed level.
  std::vector<std::string> names;
  std::vector<Index> numeric_out;
  struct Block {
    std::size_t source;
    Role role;
    Index offset;
    std::map<std::string, Index> levels;
  };
  std::vector<Block> blocks;
  Index width = 0;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (roles[i] == Role::kNumeric) {
      // Compare numerically: "1" and "1.0" are the same value.
      const double first = ParseDouble(kept.front()[i], header[i], 0);
      bool constant = true;
      for (const auto& r : kept) {
        if (ParseDouble(r[i], header[i], 0) != first) {
          constant = false;
          break;
        }
      }
      if (constant) {
        Fail(ErrorCode::kData, "csv: column '" + header[i] +
                                   "' has a single distinct value");
      }
      blocks.push_back({i, Role::kNumeric, width, {}});
      names.push_back(header[i]);
      numeric_out.push_back(width);
      ++width;
    } else if (roles[i] == Role::kCategorical) {
      std::set<std::string> levels;
      for (const auto& r : kept) levels.insert(r[i]);
      if (levels.size() < 2) {
        Fail(ErrorCode::kData, "csv: column '" + header[i] +
                                   "' has a single distinct value");
      }
      Block b{i, Role::kCategorical, width, {}};
      for (const auto& level : levels) {
        b.levels.emplace(level, width);
        names.push_back(header[i] + "=" + level);
        ++width;
      }
      blocks.push_back(std::move(b));
    }
  }

  const Index n = static_cast<Index>(kept.size());
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, width);
  Eigen::VectorXd y(n);
  Eigen::VectorXd z(n);
  for (Index r = 0; r < n; ++r) {
    const auto& fields = kept[static_cast<std::size_t>(r)];
    y[r] = Contains(schema.positive_labels, fields[label_idx]) ? 1.0 : -1.0;
    z[r] = fields[sens_idx] == schema.protected_value ? 0.0 : 1.0;
    for (const auto& b : blocks) {
      if (b.role == Role::kNumeric) {
        raw(r, b.offset) = ParseDouble(fields[b.source], header[b.source], 0);
      } else {
        raw(r, b.levels.at(fields[b.source])) = 1.0;
      }
    }
  }

  Dataset ds = Dataset::FromRaw(raw, std::move(y), std::move(z), schema.name,
                                std::move(names), std::move(numeric_out));
  if (schema.standardization == Standardization::kFullDataset) {
    ds = Standardizer::Fit(ds).Apply(ds);
  }
  return ds;
}

void WriteCsv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  const Index raw_width = ds.width() - 1;
  for (Index j = 0; j < raw_width; ++j) {
    out << ds.feature_names()[static_cast<std::size_t>(j)] << ',';
  }
  out << "z,y\n";
  char buf[64];
  for (Index i = 0; i < ds.rows(); ++i) {
    for (Index j = 0; j < raw_width; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.features()(i, j));
      out << buf << ',';
    }
    out << static_cast<int>(ds.sensitive()[i]) << ','
        << static_cast<int>(ds.labels()[i]) << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Standardization

Standardizer Standardizer::Fit(const Dataset& ds) {
  Standardizer s;
  s.columns_ = ds.numeric_columns();
  if (ds.rows() == 0) Fail(ErrorCode::kData, "standardize: empty dataset");
  for (Index c : s.columns_) {
    const auto col = ds.features().col(c);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    if (!(var > 0.0)) {
      Fail(ErrorCode::kData, "standardize: column '" +
                                 ds.feature_names()[static_cast<std::size_t>(c)] +
                                 "' has zero variance");
    }
    s.means_.push_back(mean);
    s.scales_.push_back(std::sqrt(var));
  }
  return s;
}

Dataset Standardizer::Apply(const Dataset& ds) const {
  Eigen::MatrixXd f = ds.features();
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    const Index c = columns_[k];
    if (c + 1 >= f.cols()) Fail(ErrorCode::kData, "standardize: width mismatch");
    f.col(c) = (f.col(c).array() - means_[k]) / scales_[k];
  }
  return ds.WithFeatures(std::move(f));
}

// ---------------------------------------------------------------------------
// Splitting and balancing

void SplitSpec::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0) ||
      !(val_fraction_of_train > 0.0 && val_fraction_of_train < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "split: fractions must lie in (0, 1)");
  }
}

SplitSizes ComputeSplitSizes(Index rows, const SplitSpec& spec) {
  spec.Validate();
  if (rows < 10) {
    Fail(ErrorCode::kData, "split: need at least 10 rows, got " +
                               std::to_string(rows));
  }
  SplitSizes s;
  s.test = static_cast<Index>(
      std::llround(static_cast<double>(rows) * (1.0 - spec.train_fraction)));
  const Index rest = rows - s.test;
  s.val = static_cast<Index>(
      std::llround(static_cast<double>(rest) * spec.val_fraction_of_train));
  s.train = rest - s.val;
  if (s.train < 1 || s.val < 1 || s.test < 1) {
    Fail(ErrorCode::kData, "split: " + std::to_string(rows) +
                               " rows leave an empty split");
  }
  return s;
}

SplitIndices SplitRows(Index rows, const SplitSpec& spec) {
  const SplitSizes sizes = ComputeSplitSizes(rows, spec);
  std::vector<Index> perm(static_cast<std::size_t>(rows));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  SplitIndices out;
  const auto b = perm.begin();
  out.train.assign(b, b + sizes.train);
  out.val.assign(b + sizes.train, b + sizes.train + sizes.val);
  out.test.assign(b + sizes.train + sizes.val, perm.end());
  return out;
}

DatasetSplit Split(const Dataset& ds, const SplitSpec& spec) {
  const SplitIndices idx = SplitRows(ds.rows(), spec);
  return {ds.Subset(idx.train), ds.Subset(idx.val), ds.Subset(idx.test)};
}

Dataset BalanceClasses(const Dataset& ds, std::uint64_t seed) {
  std::vector<Index> pos;
  std::vector<Index> neg;
  for (Index i = 0; i < ds.rows(); ++i) {
    (ds.labels()[i] > 0 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    Fail(ErrorCode::kData, "balance: one class is absent");
  }
  std::vector<Index>& majority = pos.size() > neg.size() ? pos : neg;
  const std::size_t target = std::min(pos.size(), neg.size());
  if (majority.size() > target) {
    std::mt19937_64 rng(seed);
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(target);
  }
  std::vector<Index> keep;
  keep.reserve(2 * target);
  keep.insert(keep.end(), pos.begin(), pos.end());
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::sort(keep.begin(), keep.end());
  return ds.Subset(keep);
}

}  // namespace lossfair
