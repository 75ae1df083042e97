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

#include "lossfair/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lossfair/error.hpp"
#include "lossfair/model_io.hpp"

namespace lossfair {

using nlohmann::json;

const char* const kRecordsHeader =
    "seed,m,variant,status,compliant,lambda,c,gamma,objective,accuracy,"
    "benefit_z0,benefit_z1,disparity,kkt_residual,max_violation,proxy_slack";
const char* const kAggregatesHeader =
    "m,variant,n_optimal,n_seeds,accuracy_mean,accuracy_std,benefit_z0_mean,"
    "benefit_z0_std,benefit_z1_mean,benefit_z1_std,disparity_mean,disparity_std";
const char* const kBaselinesHeader =
    "seed,ok,lambda,c_star,objective,accuracy,benefit_z0,benefit_z1,disparity,"
    "train_benefit_z0,train_benefit_z1";

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseNumber(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    Fail(ErrorCode::kData, "records: bad number '" + text + "'");
  }
  return v;
}

void RequireKnownKeys(const json& j, const std::set<std::string>& known,
                      const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      Fail(ErrorCode::kConfig, "config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path;
}

template <typename T>
bool StrictlyIncreasing(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(),
                            [](T a, T b) { return !(a < b); }) == v.end();
}

std::pair<double, double> MeanStd(const std::vector<double>& values) {
  if (values.empty()) return {kNaN, kNaN};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string MTag(double m) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", m);
  return buf;
}

}  // namespace

const char* DataSourceName(DataSource source) {
  switch (source) {
    case DataSource::kSyntheticSp:
      return "synthetic-sp";
    case DataSource::kSyntheticEop:
      return "synthetic-eop";
    case DataSource::kCsv:
      return "csv";
  }
  return "unknown";
}

const char* VariantName(Variant v) {
  return v == Variant::kNondiscOnly ? "nondisc" : "loss-averse";
}

Variant ParseVariant(const std::string& text) {
  if (text == "nondisc") return Variant::kNondiscOnly;
  if (text == "loss-averse") return Variant::kLossAverse;
  Fail(ErrorCode::kData, "unknown variant '" + text + "'");
}

SolveStatus ParseSolveStatus(const std::string& text) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kInfeasible,
                        SolveStatus::kIterationLimit}) {
    if (text == SolveStatusName(s)) return s;
  }
  Fail(ErrorCode::kData, "unknown solve status '" + text + "'");
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::Validate() const {
  if (seeds.empty()) Fail(ErrorCode::kConfig, "config: at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    Fail(ErrorCode::kConfig, "config: duplicate seeds");
  }
  if (m_values.empty()) Fail(ErrorCode::kConfig, "config: m_values is empty");
  for (double m : m_values) {
    if (!(m >= 0.0 && m <= 1.0)) {
      Fail(ErrorCode::kConfig, "config: m values must lie in [0, 1]");
    }
  }
  for (std::size_t i = 1; i < m_values.size(); ++i) {
    if (!(m_values[i] < m_values[i - 1])) {
      Fail(ErrorCode::kConfig, "config: m values must be strictly descending");
    }
  }
  if (lambda_grid.empty() || !StrictlyIncreasing(lambda_grid) ||
      !(lambda_grid.front() > 0.0)) {
    Fail(ErrorCode::kConfig,
         "config: lambda_grid must be non-empty, positive and ascending");
  }
  if (gamma_grid.empty() || !StrictlyIncreasing(gamma_grid) ||
      !(gamma_grid.front() >= 0.0) || !std::isfinite(gamma_grid.back())) {
    Fail(ErrorCode::kConfig,
         "config: gamma_grid must be non-empty, non-negative and ascending");
  }
  if (threads < 1) Fail(ErrorCode::kConfig, "config: threads must be >= 1");
  try {
    split.Validate();
    solve.Validate();
    synth.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  if (source == DataSource::kCsv) {
    if (csv_path.empty()) Fail(ErrorCode::kConfig, "config: csv source needs a path");
    schema.Validate();
  }
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text,
                                       const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorCode::kConfig, "config: top level must be an object");
  RequireKnownKeys(j,
                   {"dataset", "kind", "m_values", "seeds", "lambda_grid",
                    "gamma_grid", "split", "solver", "strict_gain", "output_dir",
                    "write_models", "trace", "threads"},
                   "config");
  ExperimentConfig cfg;
  try {
    const json& d = j.at("dataset");
    RequireKnownKeys(d,
                     {"source", "n", "seed", "phi", "eop_protected_positive_mean",
                      "path", "schema", "balance_classes", "balance_seed",
                      "standardize_per_split"},
                     "dataset");
    const std::string source = d.at("source").get<std::string>();
    if (source == "synthetic-sp") {
      cfg.source = DataSource::kSyntheticSp;
    } else if (source == "synthetic-eop") {
      cfg.source = DataSource::kSyntheticEop;
      cfg.synth.n = 16000;
    } else if (source == "csv") {
      cfg.source = DataSource::kCsv;
    } else {
      Fail(ErrorCode::kConfig, "config: unknown dataset source '" + source + "'");
    }
    if (d.contains("n")) cfg.synth.n = d.at("n").get<Index>();
    if (d.contains("seed")) cfg.synth.seed = d.at("seed").get<std::uint64_t>();
    if (d.contains("phi")) cfg.synth.phi = d.at("phi").get<double>();
    if (d.contains("eop_protected_positive_mean")) {
      const auto v = d.at("eop_protected_positive_mean").get<std::vector<double>>();
      if (v.size() != 2) Fail(ErrorCode::kConfig, "config: mean needs 2 entries");
      cfg.synth.eop_protected_positive_mean = Eigen::Vector2d(v[0], v[1]);
    }
    if (cfg.source == DataSource::kCsv) {
      cfg.csv_path = Resolve(base_dir, d.at("path").get<std::string>());
      const json& schema = d.at("schema");
      if (schema.is_string()) {
        cfg.schema = LoadSchema(Resolve(base_dir, schema.get<std::string>()));
      } else {
        cfg.schema = SchemaFromJsonText(schema.dump());
      }
    }
    cfg.balance_classes = d.value("balance_classes", false);
    cfg.balance_seed = d.value("balance_seed", std::uint64_t{0});
    cfg.standardize_per_split = d.value("standardize_per_split", false);

    if (j.contains("kind")) cfg.kind = ParseBenefitKind(j.at("kind").get<std::string>());
    if (j.contains("m_values")) cfg.m_values = j.at("m_values").get<std::vector<double>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("lambda_grid")) {
      cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    }
    if (j.contains("gamma_grid")) {
      cfg.gamma_grid = j.at("gamma_grid").get<std::vector<double>>();
    }
    if (j.contains("split")) {
      const json& s = j.at("split");
      RequireKnownKeys(s, {"train_fraction", "val_fraction_of_train"}, "split");
      cfg.split.train_fraction = s.value("train_fraction", cfg.split.train_fraction);
      cfg.split.val_fraction_of_train =
          s.value("val_fraction_of_train", cfg.split.val_fraction_of_train);
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      RequireKnownKeys(s,
                       {"kkt_tolerance", "feasibility_tolerance",
                        "max_outer_iterations", "max_inner_iterations",
                        "penalty_growth", "initial_penalty", "regularize_bias"},
                       "solver");
      SolveOptions& o = cfg.solve;
      o.kkt_tolerance = s.value("kkt_tolerance", o.kkt_tolerance);
      o.feasibility_tolerance = s.value("feasibility_tolerance", o.feasibility_tolerance);
      o.max_outer_iterations = s.value("max_outer_iterations", o.max_outer_iterations);
      o.max_inner_iterations = s.value("max_inner_iterations", o.max_inner_iterations);
      o.penalty_growth = s.value("penalty_growth", o.penalty_growth);
      o.initial_penalty = s.value("initial_penalty", o.initial_penalty);
      o.regularize_bias = s.value("regularize_bias", o.regularize_bias);
    }
    cfg.strict_gain = j.value("strict_gain", false);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.write_models = j.value("write_models", true);
    if (j.value("trace", false)) cfg.trace_path = "trace.jsonl";
    cfg.threads = j.value("threads", 1);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    Fail(ErrorCode::kConfig, e.what());
  }
  cfg.Validate();

  json echo = j;
  echo["kind"] = BenefitKindName(cfg.kind);
  echo["m_values"] = cfg.m_values;
  echo["seeds"] = cfg.seeds;
  echo["lambda_grid"] = cfg.lambda_grid;
  echo["gamma_grid"] = cfg.gamma_grid;
  cfg.echo_json = echo.dump(2);
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kConfig, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str(), path.parent_path());
}

Dataset LoadExperimentData(const ExperimentConfig& cfg) {
  Dataset ds;
  switch (cfg.source) {
    case DataSource::kSyntheticSp:
      ds = GenerateSpDataset(cfg.synth);
      break;
    case DataSource::kSyntheticEop:
      ds = GenerateEopDataset(cfg.synth);
      break;
    case DataSource::kCsv: {
      CsvSchema schema = cfg.schema;
      if (cfg.standardize_per_split) schema.standardization = Standardization::kNone;
      ds = LoadCsv(cfg.csv_path, schema);
      break;
    }
  }
  if (cfg.balance_classes) ds = BalanceClasses(ds, cfg.balance_seed);
  return ds;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct SeedOutcome {
  SeedBaseline baseline;
  std::vector<CellRecord> cells;
  std::string trace;
};

CellRecord FailedCell(std::uint64_t seed, double m, Variant v) {
  CellRecord r;
  r.seed = seed;
  r.m = m;
  r.variant = v;
  r.status = SolveStatus::kIterationLimit;
  r.compliant = false;
  r.lambda = r.c = r.objective = r.accuracy = r.disparity = kNaN;
  r.gamma = r.kkt_residual = r.max_violation = r.proxy_slack = kNaN;
  r.benefit[0] = r.benefit[1] = kNaN;
  return r;
}

void FillCell(CellRecord& cell, const SolveReport& report, const Dataset& test,
              BenefitKind kind) {
  cell.status = report.status;
  cell.objective = report.objective;
  cell.kkt_residual = report.kkt_residual;
  cell.max_violation = report.max_constraint_violation;
  const GroupReport g = Evaluate(report.theta, test, kind);
  cell.accuracy = g.accuracy;
  cell.benefit[0] = g.benefit[0];
  cell.benefit[1] = g.benefit[1];
  cell.disparity = g.disparity;
  cell.theta = report.theta.theta();
}

SeedOutcome RunSeed(const ExperimentConfig& cfg, const Dataset& data,
                    std::uint64_t seed) {
  SeedOutcome out;
  out.baseline.seed = seed;
  const bool tracing = !cfg.trace_path.empty();

  auto options_for = [&](const std::string& context) {
    SolveOptions o = cfg.solve;
    if (tracing) {
      o.trace = [&out, context](const TraceRecord& rec) {
        std::string line = TraceRecordToJsonLine(rec);
        line.insert(1, context);
        out.trace += line;
        out.trace += '\n';
      };
    }
    return o;
  };
  auto context = [seed](const std::string& stage) {
    return "\"seed\":" + std::to_string(seed) + ",\"stage\":\"" + stage + "\",";
  };

  SplitSpec spec = cfg.split;
  spec.seed = seed;
  DatasetSplit parts = Split(data, spec);
  if (cfg.standardize_per_split) {
    const Standardizer st = Standardizer::Fit(parts.train);
    parts.train = st.Apply(parts.train);
    parts.val = st.Apply(parts.val);
    parts.test = st.Apply(parts.test);
  }

  StatusQuo sqo;
  double c_star = 0.0;
  try {
    const double lambda = SelectLambda(parts.train, parts.val, cfg.lambda_grid,
                                       options_for(context("select-lambda")));
    sqo = TrainStatusQuo(parts.train, lambda, options_for(context("status-quo")));
    c_star = ComputeCStar(sqo, parts.train, cfg.kind);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSolver) throw;
    out.baseline.ok = false;
    out.baseline.error = e.what();
    for (double m : cfg.m_values) {
      out.cells.push_back(FailedCell(seed, m, Variant::kNondiscOnly));
      out.cells.push_back(FailedCell(seed, m, Variant::kLossAverse));
    }
    return out;
  }

  SeedBaseline& b = out.baseline;
  b.ok = true;
  b.lambda = sqo.lambda;
  b.c_star = c_star;
  b.objective = sqo.report.objective;
  const GroupReport base = Evaluate(sqo.model, parts.test, cfg.kind);
  b.accuracy = base.accuracy;
  b.benefit[0] = base.benefit[0];
  b.benefit[1] = base.benefit[1];
  b.disparity = base.disparity;
  b.train_benefit[0] = sqo.Benefit(cfg.kind, 0);
  b.train_benefit[1] = sqo.Benefit(cfg.kind, 1);
  b.theta = sqo.model.theta();

  Eigen::VectorXd warm_nondisc = sqo.model.theta();
  Eigen::VectorXd warm_averse = sqo.model.theta();
  for (double m : cfg.m_values) {
    const double c = m * c_star;
    const std::string mtag = MTag(m);

    CellRecord nd;
    nd.seed = seed;
    nd.m = m;
    nd.variant = Variant::kNondiscOnly;
    nd.lambda = sqo.lambda;
    nd.c = c;
    nd.gamma = kNaN;
    nd.proxy_slack = kNaN;
    const SolveReport nd_report = TrainNondiscriminatory(
        parts.train, sqo.lambda, cfg.kind, c,
        options_for(context("nondisc") + "\"m\":" + mtag + ","), &warm_nondisc);
    FillCell(nd, nd_report, parts.test, cfg.kind);
    nd.compliant = true;
    if (nd_report.optimal()) warm_nondisc = nd_report.theta.theta();
    out.cells.push_back(std::move(nd));

    CellRecord la;
    la.seed = seed;
    la.m = m;
    la.variant = Variant::kLossAverse;
    la.lambda = sqo.lambda;
    la.c = c;
    LossAverseOptions la_opts;
    la_opts.strict_gain = cfg.strict_gain;
    const LossAverseResult la_result = TrainLossAverse(
        parts.train, parts.val, sqo.lambda, cfg.kind, c, cfg.gamma_grid, sqo,
        options_for(context("loss-averse") + "\"m\":" + mtag + ","), &warm_averse,
        la_opts);
    FillCell(la, la_result.report, parts.test, cfg.kind);
    la.gamma = la_result.gamma;
    la.compliant = la_result.compliant;
    la.proxy_slack = LossAverseProxySlack(la_result.report.theta, sqo.model,
                                          parts.train, cfg.kind, la_result.gamma);
    if (la_result.report.optimal()) warm_averse = la_result.report.theta.theta();
    out.cells.push_back(std::move(la));
  }
  return out;
}

}  // namespace

int SweepResult::OptimalCells() const {
  int n = 0;
  for (const auto& r : records) n += r.status == SolveStatus::kOptimal ? 1 : 0;
  return n;
}

std::vector<AggregateRow> AggregateRecords(const std::vector<CellRecord>& records,
                                           const std::vector<double>& m_order) {
  std::vector<AggregateRow> rows;
  for (double m : m_order) {
    for (Variant v : {Variant::kNondiscOnly, Variant::kLossAverse}) {
      AggregateRow row;
      row.m = m;
      row.variant = v;
      std::vector<double> acc, b0, b1, disp;
      std::set<std::uint64_t> seeds;
      for (const auto& r : records) {
        if (r.m != m || r.variant != v) continue;
        seeds.insert(r.seed);
        if (r.status != SolveStatus::kOptimal) continue;
        acc.push_back(r.accuracy);
        b0.push_back(r.benefit[0]);
        b1.push_back(r.benefit[1]);
        disp.push_back(r.disparity);
      }
      row.n_seeds = static_cast<int>(seeds.size());
      row.n_optimal = static_cast<int>(acc.size());
      std::tie(row.accuracy_mean, row.accuracy_std) = MeanStd(acc);
      std::tie(row.benefit_mean[0], row.benefit_std[0]) = MeanStd(b0);
      std::tie(row.benefit_mean[1], row.benefit_std[1]) = MeanStd(b1);
      std::tie(row.disparity_mean, row.disparity_std) = MeanStd(disp);
      if (row.n_seeds > 0) rows.push_back(row);
    }
  }
  return rows;
}

SweepResult RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  return RunExperiment(cfg, LoadExperimentData(cfg));
}

SweepResult RunExperiment(const ExperimentConfig& cfg, const Dataset& data) {
  cfg.Validate();
  std::vector<SeedOutcome> outcomes(cfg.seeds.size());
  const int workers =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(cfg.seeds.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      outcomes[i] = RunSeed(cfg, data, cfg.seeds[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
          try {
            outcomes[i] = RunSeed(cfg, data, cfg.seeds[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  SweepResult result;
  result.m_values = cfg.m_values;
  result.kind = cfg.kind;
  result.dataset_tag = data.name();
  result.config_echo = cfg.echo_json;
  for (auto& o : outcomes) {
    result.baselines.push_back(std::move(o.baseline));
    for (auto& c : o.cells) result.records.push_back(std::move(c));
    result.trace += o.trace;
  }
  result.aggregates = AggregateRecords(result.records, cfg.m_values);
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

std::string RecordsCsv(const std::vector<CellRecord>& records) {
  std::string out = std::string(kRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + "," + Fmt(r.m) + "," + VariantName(r.variant) +
           "," + SolveStatusName(r.status) + "," + (r.compliant ? "1" : "0") + "," +
           Fmt(r.lambda) + "," + Fmt(r.c) + "," + Fmt(r.gamma) + "," +
           Fmt(r.objective) + "," + Fmt(r.accuracy) + "," + Fmt(r.benefit[0]) + "," +
           Fmt(r.benefit[1]) + "," + Fmt(r.disparity) + "," + Fmt(r.kkt_residual) +
           "," + Fmt(r.max_violation) + "," + Fmt(r.proxy_slack) + "\n";
  }
  return out;
}

std::vector<CellRecord> ParseRecordsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    Fail(ErrorCode::kData, "records: unexpected header");
  }
  std::vector<CellRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 16) Fail(ErrorCode::kData, "records: expected 16 fields");
    CellRecord r;
    r.seed = std::stoull(f[0]);
    r.m = ParseNumber(f[1]);
    r.variant = ParseVariant(f[2]);
    r.status = ParseSolveStatus(f[3]);
    r.compliant = f[4] == "1";
    r.lambda = ParseNumber(f[5]);
    r.c = ParseNumber(f[6]);
    r.gamma = ParseNumber(f[7]);
    r.objective = ParseNumber(f[8]);
    r.accuracy = ParseNumber(f[9]);
    r.benefit[0] = ParseNumber(f[10]);
    r.benefit[1] = ParseNumber(f[11]);
    r.disparity = ParseNumber(f[12]);
    r.kkt_residual = ParseNumber(f[13]);
    r.max_violation = ParseNumber(f[14]);
    r.proxy_slack = ParseNumber(f[15]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string AggregatesCsv(const std::vector<AggregateRow>& rows) {
  std::string out = std::string(kAggregatesHeader) + "\n";
  for (const auto& r : rows) {
    out += Fmt(r.m) + "," + VariantName(r.variant) + "," +
           std::to_string(r.n_optimal) + "," + std::to_string(r.n_seeds) + "," +
           Fmt(r.accuracy_mean) + "," + Fmt(r.accuracy_std) + "," +
           Fmt(r.benefit_mean[0]) + "," + Fmt(r.benefit_std[0]) + "," +
           Fmt(r.benefit_mean[1]) + "," + Fmt(r.benefit_std[1]) + "," +
           Fmt(r.disparity_mean) + "," + Fmt(r.disparity_std) + "\n";
  }
  return out;
}

std::string BaselinesCsv(const std::vector<SeedBaseline>& baselines) {
  std::string out = std::string(kBaselinesHeader) + "\n";
  for (const auto& b : baselines) {
    out += std::to_string(b.seed) + "," + (b.ok ? "1" : "0") + "," + Fmt(b.lambda) +
           "," + Fmt(b.c_star) + "," + Fmt(b.objective) + "," + Fmt(b.accuracy) +
           "," + Fmt(b.benefit[0]) + "," + Fmt(b.benefit[1]) + "," +
           Fmt(b.disparity) + "," + Fmt(b.train_benefit[0]) + "," +
           Fmt(b.train_benefit[1]) + "\n";
  }
  return out;
}

void EmitResults(const SweepResult& result, const std::filesystem::path& dir,
                 bool write_models) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  WriteText(dir / "records.csv", RecordsCsv(result.records));
  WriteText(dir / "aggregates.csv", AggregatesCsv(result.aggregates));
  WriteText(dir / "baselines.csv", BaselinesCsv(result.baselines));
  if (!result.trace.empty()) WriteText(dir / "trace.jsonl", result.trace);

  json summary;
  summary["config"] = result.config_echo.empty() ? json::object()
                                                 : json::parse(result.config_echo);
  summary["dataset"] = result.dataset_tag;
  summary["kind"] = BenefitKindName(result.kind);
  summary["cells"] = result.records.size();
  summary["optimal_cells"] = result.OptimalCells();
  summary["all_cells_failed"] = result.AllCellsFailed();
  json failed = json::array();
  for (const auto& b : result.baselines) {
    if (!b.ok) failed.push_back({{"seed", b.seed}, {"error", b.error}});
  }
  summary["failed_seeds"] = failed;
  summary["columns"] = {{"records", kRecordsHeader},
                        {"aggregates", kAggregatesHeader},
                        {"baselines", kBaselinesHeader}};
  summary["environment"] = {{"library_version", "0.1.0"},
                            {"compiler", __VERSION__},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)},
                            {"created_utc", UtcTimestamp()}};
  WriteText(dir / "summary.json", summary.dump(2) + "\n");

  if (write_models) {
    const auto models = dir / "models";
    std::filesystem::create_directories(models, ec);
    if (ec) Fail(ErrorCode::kIo, "cannot create " + models.string());
    for (const auto& b : result.baselines) {
      if (!b.ok) continue;
      SaveModel(LinearModel(b.theta, result.dataset_tag),
                models / ("seed" + std::to_string(b.seed) + "_sqo.txt"));
    }
    for (const auto& r : result.records) {
      if (r.theta.size() == 0) continue;
      SaveModel(LinearModel(r.theta, result.dataset_tag),
                models / ("seed" + std::to_string(r.seed) + "_m" + MTag(r.m) + "_" +
                          VariantName(r.variant) + ".txt"));
    }
  }
}

}  // namespace lossfair
