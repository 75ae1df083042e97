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

#include <cmath>
#include <set>

#include <optional>

#include <gtest/gtest.h>

#include "json.hpp"
#include "lossfair/error.hpp"
#include "lossfair/harness.hpp"
#include "lossfair/model_io.hpp"
#include "test_util.hpp"

namespace lossfair {
namespace {

using testing::ReadFile;
using testing::TempDir;

const char* const kSmallConfig = R"({
  "dataset": {"source": "synthetic-sp", "n": 600, "seed": 4},
  "m_values": [1.0, 0.5, 0.0],
  "seeds": [0, 1, 2],
  "lambda_grid": [1e-4, 1e-3],
  "gamma_grid": [0.0, 0.1],
  "write_models": true
})";

std::optional<ErrorCode> CodeOf(const std::string& text) {
  try {
    ParseExperimentConfig(text);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(Config, ParsesSmallSweep) {
  const ExperimentConfig cfg = ParseExperimentConfig(kSmallConfig);
  EXPECT_EQ(cfg.source, DataSource::kSyntheticSp);
  EXPECT_EQ(cfg.synth.n, 600);
  EXPECT_EQ(cfg.synth.seed, 4u);
  EXPECT_EQ(cfg.seeds.size(), 3u);
  EXPECT_EQ(cfg.kind, BenefitKind::kAcceptanceRate);
  EXPECT_TRUE(cfg.trace_path.empty());
  EXPECT_FALSE(cfg.echo_json.empty());

  const ExperimentConfig eop = ParseExperimentConfig(
      R"({"dataset": {"source": "synthetic-eop"}, "kind": "eop", "trace": true,
          "solver": {"regularize_bias": false}})");
  EXPECT_EQ(eop.synth.n, 16000);
  EXPECT_EQ(eop.kind, BenefitKind::kTruePositiveRate);
  EXPECT_FALSE(eop.solve.regularize_bias);
  EXPECT_FALSE(eop.trace_path.empty());
}

TEST(Config, RejectsInvalidInput) {
  const std::string ds = R"("dataset": {"source": "synthetic-sp"})";
  EXPECT_EQ(CodeOf("{" + ds + R"(, "seeds": []})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "seeds": [1, 1]})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "m_values": [0.5, 0.8]})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "m_values": [1.5]})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "lambda_grid": [0.0, 1.0]})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "gamma_grid": [-1.0]})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "typo_key": 1})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf(R"({"dataset": {"source": "synthetic-sp", "nn": 5}})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf(R"({"dataset": {"source": "nope"}})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "kind": "other"})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{" + ds + R"(, "threads": 0})"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("not json"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf("{}"), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf(ds.substr(0, 5)), ErrorCode::kConfig);
  EXPECT_THROW(LoadExperimentConfig("/nonexistent/config.json"), Error);
}

TEST(Config, CsvPathsResolveAgainstConfigDirectory) {
  TempDir dir("cfg");
  testing::WriteFile(dir / "data.csv", "y,z,x\n1,0,1\n0,1,2\n1,1,3\n0,0,4\n");
  testing::WriteFile(dir / "cfg.json", R"({
    "dataset": {"source": "csv", "path": "data.csv",
                "schema": {"label": {"column": "y", "positive": ["1"]},
                           "sensitive": {"column": "z", "protected": "0"},
                           "numeric": ["x"], "standardize": "none"}}})");
  const ExperimentConfig cfg = LoadExperimentConfig(dir / "cfg.json");
  EXPECT_EQ(cfg.csv_path, dir / "data.csv");
  const Dataset ds = LoadExperimentData(cfg);
  EXPECT_EQ(ds.rows(), 4);
}

class SmallSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new ExperimentConfig(ParseExperimentConfig(kSmallConfig));
    result_ = new SweepResult(RunExperiment(*cfg_));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete cfg_;
  }
  static ExperimentConfig* cfg_;
  static SweepResult* result_;
};
ExperimentConfig* SmallSweep::cfg_ = nullptr;
SweepResult* SmallSweep::result_ = nullptr;

TEST_F(SmallSweep, OneRecordPerSeedMAndVariant) {
  const SweepResult& r = *result_;
  ASSERT_EQ(r.records.size(), 3u * 3u * 2u);
  std::set<std::tuple<std::uint64_t, double, Variant>> cells;
  for (const auto& rec : r.records) cells.insert({rec.seed, rec.m, rec.variant});
  EXPECT_EQ(cells.size(), r.records.size());
  EXPECT_EQ(r.baselines.size(), 3u);
  EXPECT_EQ(r.aggregates.size(), 6u);
  EXPECT_EQ(r.OptimalCells(), 18);
  EXPECT_FALSE(r.AllCellsFailed());
  for (const auto& rec : r.records) {
    if (rec.variant == Variant::kNondiscOnly) {
      EXPECT_TRUE(std::isnan(rec.gamma));
      EXPECT_TRUE(std::isnan(rec.proxy_slack));
    } else if (rec.compliant) {
      EXPECT_GE(rec.proxy_slack, -1e-6);
    }
    EXPECT_LE(rec.max_violation, 1e-6);
  }
}

TEST_F(SmallSweep, MOneMatchesBaselineOnTest) {
  for (const auto& rec : result_->records) {
    if (rec.m != 1.0 || rec.variant != Variant::kNondiscOnly) continue;
    const SeedBaseline& b = result_->baselines[rec.seed];
    EXPECT_NEAR(rec.accuracy, b.accuracy, 2e-3);
    EXPECT_NEAR(rec.c, b.c_star, 1e-15);
  }
}

TEST_F(SmallSweep, CsvRoundTripReaggregatesIdentically) {
  const std::vector<CellRecord> parsed = ParseRecordsCsv(RecordsCsv(result_->records));
  ASSERT_EQ(parsed.size(), result_->records.size());
  EXPECT_EQ(RecordsCsv(parsed), RecordsCsv(result_->records));
  EXPECT_EQ(AggregatesCsv(AggregateRecords(parsed, cfg_->m_values)),
            AggregatesCsv(result_->aggregates));
}

TEST_F(SmallSweep, AggregatesAreMeanAndSampleStd) {
  for (const AggregateRow& row : result_->aggregates) {
    std::vector<double> acc;
    for (const auto& rec : result_->records) {
      if (rec.m == row.m && rec.variant == row.variant) acc.push_back(rec.accuracy);
    }
    ASSERT_EQ(acc.size(), 3u);
    const double mean = (acc[0] + acc[1] + acc[2]) / 3.0;
    double ss = 0;
    for (double a : acc) ss += (a - mean) * (a - mean);
    EXPECT_NEAR(row.accuracy_mean, mean, 1e-15);
    EXPECT_NEAR(row.accuracy_std, std::sqrt(ss / 2.0), 1e-15);
  }
}

TEST_F(SmallSweep, EmitsFilesAndModels) {
  TempDir dir("emit");
  EmitResults(*result_, dir.path(), true);
  for (const char* f : {"records.csv", "aggregates.csv", "baselines.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(ReadFile(dir / "records.csv"), RecordsCsv(result_->records));
  const auto summary = nlohmann::json::parse(ReadFile(dir / "summary.json"));
  EXPECT_EQ(summary.at("cells").get<int>(), 18);
  EXPECT_EQ(summary.at("optimal_cells").get<int>(), 18);
  EXPECT_FALSE(summary.at("all_cells_failed").get<bool>());
  EXPECT_TRUE(summary.contains("environment"));
  const LinearModel sqo = LoadModel(dir.path() / "models" / "seed1_sqo.txt");
  EXPECT_EQ(sqo.theta(), result_->baselines[1].theta);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "models" / "seed2_m0_loss-averse.txt"));
}

TEST_F(SmallSweep, RerunAndThreadedRunAreBitIdentical) {
  const SweepResult again = RunExperiment(*cfg_);
  EXPECT_EQ(RecordsCsv(again.records), RecordsCsv(result_->records));
  ExperimentConfig threaded = *cfg_;
  threaded.threads = 3;
  const SweepResult parallel = RunExperiment(threaded);
  EXPECT_EQ(RecordsCsv(parallel.records), RecordsCsv(result_->records));
  EXPECT_EQ(BaselinesCsv(parallel.baselines), BaselinesCsv(result_->baselines));
}

TEST(Harness, EmptyResultWritesHeadersOnly) {
  TempDir dir("empty");
  SweepResult empty;
  EmitResults(empty, dir.path());
  EXPECT_EQ(ReadFile(dir / "records.csv"), std::string(kRecordsHeader) + "\n");
  EXPECT_EQ(ReadFile(dir / "aggregates.csv"), std::string(kAggregatesHeader) + "\n");
  EXPECT_FALSE(empty.AllCellsFailed());
}

TEST(Harness, FailedCellsAreExcludedFromAggregates) {
  std::vector<CellRecord> records(3);
  for (int i = 0; i < 3; ++i) {
    records[i].seed = i;
    records[i].m = 0.5;
    records[i].status = i == 2 ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
    records[i].accuracy = i == 2 ? 0.0 : 0.6 + 0.2 * i;
  }
  const std::vector<AggregateRow> rows = AggregateRecords(records, {0.5});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n_seeds, 3);
  EXPECT_EQ(rows[0].n_optimal, 2);
  EXPECT_NEAR(rows[0].accuracy_mean, 0.7, 1e-15);
  EXPECT_NEAR(rows[0].accuracy_std, std::sqrt(0.02), 1e-15);
}

TEST(Harness, TraceIsCollectedWhenRequested) {
  ExperimentConfig cfg = ParseExperimentConfig(R"({
    "dataset": {"source": "synthetic-sp", "n": 300},
    "m_values": [0.0], "seeds": [0], "lambda_grid": [1e-3], "gamma_grid": [0.0],
    "trace": true})");
  const SweepResult r = RunExperiment(cfg);
  ASSERT_FALSE(r.trace.empty());
  std::istringstream lines(r.trace);
  std::string line;
  while (std::getline(lines, line)) EXPECT_NO_THROW(nlohmann::json::parse(line));
}

TEST(Harness, ParseRecordsRejectsMalformedText) {
  EXPECT_THROW(ParseRecordsCsv("bad header\n"), Error);
  EXPECT_THROW(ParseRecordsCsv(std::string(kRecordsHeader) + "\n1,2,3\n"), Error);
  EXPECT_THROW(ParseVariant("neither"), Error);
}

}  // namespace
}  // namespace lossfair
