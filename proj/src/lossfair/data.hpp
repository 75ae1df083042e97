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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lossfair {

using Index = Eigen::Index;

// Which beneficial-outcome rate a fairness notion equalizes.
//   kAcceptanceRate:   P(yhat = +1 | z = k)          (statistical parity)
//   kTruePositiveRate: P(yhat = +1 | y = +1, z = k)  (equality of opportunity)
enum class BenefitKind { kAcceptanceRate, kTruePositiveRate };

const char* BenefitKindName(BenefitKind kind);  // "sp" / "eop"
BenefitKind ParseBenefitKind(const std::string& text);

// Immutable labelled dataset with a binary sensitive attribute.
//
// The feature matrix is N x d. Its last column is the constant 1 bias term;
// the sensitive attribute is never part of it. Labels are +1/-1, sensitive
// values 0/1 (0 = protected group).
class Dataset {
 public:
  Dataset() = default;

  // Validates every invariant; throws Error(kData) on violation.
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd labels,
          Eigen::VectorXd sensitive, std::string name,
          std::vector<std::string> feature_names = {},
          std::vector<Index> numeric_columns = {});

  // Builds a dataset from raw features (without bias); appends the bias.
  static Dataset FromRaw(const Eigen::MatrixXd& raw_features,
                         Eigen::VectorXd labels, Eigen::VectorXd sensitive,
                         std::string name,
                         std::vector<std::string> feature_names = {},
                         std::vector<Index> numeric_columns = {});

  Index rows() const { return features_.rows(); }
  Index width() const { return features_.cols(); }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }
  const Eigen::VectorXd& sensitive() const { return sensitive_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  // Feature columns eligible for standardization (never the bias).
  const std::vector<Index>& numeric_columns() const { return numeric_columns_; }

  // Rows selected in the given order; metadata is carried over.
  Dataset Subset(std::span<const Index> rows) const;

  // Copy with features replaced (same shape); re-validates.
  Dataset WithFeatures(Eigen::MatrixXd features) const;

  // Copy with sensitive values 0 <-> 1 swapped.
  Dataset WithSwappedGroups() const;

  // D (AR) or D+ (TPR): the rows a benefit kind conditions on.
  std::vector<Index> ConditioningRows(BenefitKind kind) const;
  // D_{z=k} (AR) or D+_{z=k} (TPR).
  std::vector<Index> GroupRows(BenefitKind kind, int group) const;

  Index CountLabel(int label) const;
  Index CountGroup(int group) const;

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
  Eigen::VectorXd sensitive_;
  std::string name_;
  std::vector<std::string> feature_names_;
  std::vector<Index> numeric_columns_;
};

// How numeric columns are standardized by LoadCsv.
enum class Standardization {
  kFullDataset,  // statistics from every loaded row
  kNone,         // raw values; pair with Standardizer for per-split stats
};

struct CsvSchema {
  std::string label_column;
  std::vector<std::string> positive_labels;  // values mapped to +1
  std::string sensitive_column;
  std::string protected_value;               // mapped to z = 0
  // Values mapped to z = 1. Empty: every non-protected value. Otherwise rows
  // holding any other value are dropped.
  std::vector<std::string> non_protected_values;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> drop_columns;
  std::vector<std::string> missing_tokens{"", "?", "NA", "NaN"};
  Standardization standardization = Standardization::kFullDataset;
  std::string name = "csv";

  // Throws Error(kConfig) on malformed or inconsistent schemas.
  void Validate() const;
};

// Parses the JSON schema format documented in the README.
CsvSchema SchemaFromJsonText(const std::string& text);
CsvSchema LoadSchema(const std::filesystem::path& path);

// Reads a header-first comma-separated file. Rows with a missing value in any
// used column are dropped; categoricals are one-hot encoded (one column per
// observed level, sorted); numerics are standardized per the schema.
Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);
Dataset ParseCsv(std::istream& in, const CsvSchema& schema);

// Writes raw features (bias omitted) plus z and y columns. Readable by LoadCsv
// with a schema naming the feature columns numeric and standardization "none".
void WriteCsv(const Dataset& ds, const std::filesystem::path& path);

// Mean / population standard deviation per numeric column.
class Standardizer {
 public:
  static Standardizer Fit(const Dataset& ds);
  Dataset Apply(const Dataset& ds) const;

  const std::vector<Index>& columns() const { return columns_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& scales() const { return scales_; }

 private:
  std::vector<Index> columns_;
  std::vector<double> means_;
  std::vector<double> scales_;
};

struct SplitSpec {
  double train_fraction = 0.70;         // train+val share; test is the rest
  double val_fraction_of_train = 0.30;  // val share of the train+val block
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SplitSizes {
  Index train = 0;
  Index val = 0;
  Index test = 0;
};

struct SplitIndices {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
};

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

SplitSizes ComputeSplitSizes(Index rows, const SplitSpec& spec);
// Seeded uniform permutation: [train | val | test].
SplitIndices SplitRows(Index rows, const SplitSpec& spec);
DatasetSplit Split(const Dataset& ds, const SplitSpec& spec);

// Downsamples the majority class uniformly to the minority count. Selected
// rows keep their original relative order.
Dataset BalanceClasses(const Dataset& ds, std::uint64_t seed);

}  // namespace lossfair
