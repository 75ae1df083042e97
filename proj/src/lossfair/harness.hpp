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
#include <string>
#include <vector>

#include "lossfair/data.hpp"
#include "lossfair/solver.hpp"
#include "lossfair/synthgen.hpp"
#include "lossfair/trainer.hpp"

namespace lossfair {

enum class DataSource { kSyntheticSp, kSyntheticEop, kCsv };

const char* DataSourceName(DataSource source);

// Everything one sweep needs. Built from a JSON file by LoadExperimentConfig;
// see the README for the format.
struct ExperimentConfig {
  DataSource source = DataSource::kSyntheticSp;
  SynthConfig synth;  // synth.seed is the data-generation seed

  std::filesystem::path csv_path;
  CsvSchema schema;
  bool balance_classes = false;
  std::uint64_t balance_seed = 0;
  // Standardize with statistics of each training split instead of the whole
  // file; the file is then loaded unstandardized.
  bool standardize_per_split = false;

  BenefitKind kind = BenefitKind::kAcceptanceRate;
  std::vector<double> m_values{1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::vector<double> lambda_grid = DefaultLambdaGrid();
  std::vector<double> gamma_grid = DefaultGammaGrid();
  SplitSpec split;  // split.seed is replaced per shuffle
  SolveOptions solve;
  bool strict_gain = false;

  std::filesystem::path output_dir = "lossfair-out";
  bool write_models = true;
  std::filesystem::path trace_path;  // empty: no trace; else <output_dir>/trace.jsonl
  int threads = 1;

  // Normalized JSON echo written to summary.json.
  std::string echo_json;

  // Throws Error(kConfig).
  void Validate() const;
};

// Relative input paths resolve against base_dir.
ExperimentConfig ParseExperimentConfig(const std::string& json_text,
                                       const std::filesystem::path& base_dir = {});
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

Dataset LoadExperimentData(const ExperimentConfig& cfg);

enum class Variant { kNondiscOnly, kLossAverse };

const char* VariantName(Variant v);  // "nondisc" / "loss-averse"
Variant ParseVariant(const std::string& text);
SolveStatus ParseSolveStatus(const std::string& text);

// One (seed, m, variant) cell. Metrics are on the test split; objective,
// kkt_residual, max_violation and proxy_slack refer to the training solve.
struct CellRecord {
  std::uint64_t seed = 0;
  double m = 0.0;
  Variant variant = Variant::kNondiscOnly;
  SolveStatus status = SolveStatus::kIterationLimit;
  bool compliant = true;
  double lambda = 0.0;
  double c = 0.0;
  double gamma = 0.0;  // NaN for the nondisc variant
  double objective = 0.0;
  double accuracy = 0.0;
  double benefit[2] = {0.0, 0.0};
  double disparity = 0.0;
  double kkt_residual = 0.0;
  double max_violation = 0.0;
  double proxy_slack = 0.0;  // NaN for the nondisc variant
  Eigen::VectorXd theta;     // not serialized to records.csv
};

// Per-shuffle status quo, evaluated on the test split.
struct SeedBaseline {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double lambda = 0.0;
  double c_star = 0.0;
  double objective = 0.0;
  double accuracy = 0.0;
  double benefit[2] = {0.0, 0.0};
  double disparity = 0.0;
  double train_benefit[2] = {0.0, 0.0};
  Eigen::VectorXd theta;
};

struct AggregateRow {
  double m = 0.0;
  Variant variant = Variant::kNondiscOnly;
  int n_optimal = 0;
  int n_seeds = 0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double benefit_mean[2] = {0.0, 0.0};
  double benefit_std[2] = {0.0, 0.0};
  double disparity_mean = 0.0, disparity_std = 0.0;
};

struct SweepResult {
  std::vector<double> m_values;
  BenefitKind kind = BenefitKind::kAcceptanceRate;
  std::string dataset_tag;
  std::vector<SeedBaseline> baselines;
  std::vector<CellRecord> records;  // ordered by (seed, m, variant)
  std::vector<AggregateRow> aggregates;
  std::string config_echo;
  std::string trace;  // JSON lines, empty unless tracing was requested

  int OptimalCells() const;
  bool AllCellsFailed() const { return !records.empty() && OptimalCells() == 0; }
};

// Mean and sample standard deviation over Optimal cells, per (m, variant) in
// m_order, nondisc first.
std::vector<AggregateRow> AggregateRecords(const std::vector<CellRecord>& records,
                                           const std::vector<double>& m_order);

SweepResult RunExperiment(const ExperimentConfig& cfg);
SweepResult RunExperiment(const ExperimentConfig& cfg, const Dataset& data);

// Writes records.csv, aggregates.csv, baselines.csv and summary.json (and
// models/ plus trace.jsonl when present).
void EmitResults(const SweepResult& result, const std::filesystem::path& dir,
                 bool write_models = false);

std::string RecordsCsv(const std::vector<CellRecord>& records);
std::string AggregatesCsv(const std::vector<AggregateRow>& rows);
std::string BaselinesCsv(const std::vector<SeedBaseline>& baselines);
std::vector<CellRecord> ParseRecordsCsv(const std::string& text);

extern const char* const kRecordsHeader;
extern const char* const kAggregatesHeader;
extern const char* const kBaselinesHeader;

}  // namespace lossfair
