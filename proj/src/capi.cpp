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

#include "lossfair/lossfair.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "lossfair/error.hpp"
#include "lossfair/harness.hpp"
#include "lossfair/metrics.hpp"
#include "lossfair/model_io.hpp"
#include "lossfair/synthgen.hpp"
#include "lossfair/trainer.hpp"

struct lf_dataset {
  lossfair::Dataset ds;
};
struct lf_model {
  lossfair::LinearModel model;
};
struct lf_experiment {
  lossfair::ExperimentConfig cfg;
  std::string output_dir;
};
struct lf_result {
  lossfair::SweepResult result;
  std::string records_csv;
  std::string aggregates_csv;
};

namespace {

thread_local std::string g_last_error;

lf_status ToStatus(lossfair::ErrorCode code) {
  switch (code) {
    case lossfair::ErrorCode::kInvalidArgument:
      return LF_INVALID_ARGUMENT;
    case lossfair::ErrorCode::kConfig:
      return LF_CONFIG_ERROR;
    case lossfair::ErrorCode::kIo:
      return LF_IO_ERROR;
    case lossfair::ErrorCode::kData:
      return LF_DATA_ERROR;
    case lossfair::ErrorCode::kSolver:
      return LF_SOLVER_ERROR;
    case lossfair::ErrorCode::kInternal:
      return LF_INTERNAL_ERROR;
  }
  return LF_INTERNAL_ERROR;
}

template <typename F>
lf_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LF_OK;
  } catch (const lossfair::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LF_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LF_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return LF_INTERNAL_ERROR;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) lossfair::Fail(lossfair::ErrorCode::kInvalidArgument, what);
}

lossfair::BenefitKind ToKind(lf_benefit_kind kind) {
  Require(kind == LF_ACCEPTANCE_RATE || kind == LF_TRUE_POSITIVE_RATE,
          "unknown benefit kind");
  return kind == LF_ACCEPTANCE_RATE ? lossfair::BenefitKind::kAcceptanceRate
                                    : lossfair::BenefitKind::kTruePositiveRate;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* lf_last_error(void) { return g_last_error.c_str(); }

const char* lf_status_name(lf_status status) {
  switch (status) {
    case LF_OK:
      return "ok";
    case LF_INVALID_ARGUMENT:
      return "invalid argument";
    case LF_CONFIG_ERROR:
      return "config error";
    case LF_IO_ERROR:
      return "io error";
    case LF_DATA_ERROR:
      return "data error";
    case LF_SOLVER_ERROR:
      return "solver error";
    case LF_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

const char* lf_version(void) { return "0.1.0"; }

lf_status lf_dataset_generate(lf_benefit_kind kind, int64_t n, uint64_t seed,
                              lf_dataset** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = nullptr;
    lossfair::SynthConfig cfg;
    cfg.n = static_cast<lossfair::Index>(n);
    cfg.seed = seed;
    const lossfair::BenefitKind k = ToKind(kind);
    auto* h = new lf_dataset{k == lossfair::BenefitKind::kAcceptanceRate
                                 ? lossfair::GenerateSpDataset(cfg)
                                 : lossfair::GenerateEopDataset(cfg)};
    *out = h;
  });
}

lf_status lf_dataset_load_csv(const char* csv_path, const char* schema_path,
                              lf_dataset** out) {
  return Guard([&] {
    Require(out != nullptr && csv_path != nullptr && schema_path != nullptr,
            "NULL argument");
    *out = nullptr;
    const lossfair::CsvSchema schema = lossfair::LoadSchema(schema_path);
    *out = new lf_dataset{lossfair::LoadCsv(csv_path, schema)};
  });
}

lf_status lf_dataset_write_csv(const lf_dataset* ds, const char* path) {
  return Guard([&] {
    Require(ds != nullptr && path != nullptr, "NULL argument");
    lossfair::WriteCsv(ds->ds, path);
  });
}

int64_t lf_dataset_rows(const lf_dataset* ds) { return ds ? ds->ds.rows() : -1; }
int64_t lf_dataset_width(const lf_dataset* ds) { return ds ? ds->ds.width() : -1; }

int64_t lf_dataset_group_count(const lf_dataset* ds, int group) {
  if (!ds || (group != 0 && group != 1)) return -1;
  return ds->ds.CountGroup(group);
}

void lf_dataset_free(lf_dataset* ds) { delete ds; }

lf_status lf_model_create(const double* theta, int64_t dim, const char* tag,
                          lf_model** out) {
  return Guard([&] {
    Require(out != nullptr && theta != nullptr && dim > 0, "invalid model arguments");
    *out = nullptr;
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(theta, dim);
    *out = new lf_model{lossfair::LinearModel(std::move(v), tag ? tag : "")};
  });
}

lf_status lf_model_load(const char* path, lf_model** out) {
  return Guard([&] {
    Require(out != nullptr && path != nullptr, "NULL argument");
    *out = nullptr;
    *out = new lf_model{lossfair::LoadModel(path)};
  });
}

lf_status lf_model_save(const lf_model* model, const char* path) {
  return Guard([&] {
    Require(model != nullptr && path != nullptr, "NULL argument");
    lossfair::SaveModel(model->model, path);
  });
}

int64_t lf_model_dim(const lf_model* model) { return model ? model->model.dim() : -1; }

int64_t lf_model_theta(const lf_model* model, double* out, int64_t capacity) {
  if (!model) return -1;
  const auto& t = model->model.theta();
  const int64_t n = std::min<int64_t>(capacity, t.size());
  for (int64_t i = 0; out && i < n; ++i) out[i] = t[i];
  return t.size();
}

void lf_model_free(lf_model* model) { delete model; }

lf_status lf_train_status_quo(const lf_dataset* train, double lambda, lf_model** out) {
  return Guard([&] {
    Require(out != nullptr && train != nullptr, "NULL argument");
    *out = nullptr;
    lossfair::StatusQuo sqo = lossfair::TrainStatusQuo(train->ds, lambda, {});
    *out = new lf_model{lossfair::LinearModel(sqo.model.theta(), train->ds.name())};
  });
}

lf_status lf_train_nondiscriminatory(const lf_dataset* train, double lambda,
                                    lf_benefit_kind kind, double c, lf_model** out) {
  return Guard([&] {
    Require(out != nullptr && train != nullptr, "NULL argument");
    *out = nullptr;
    const lossfair::SolveReport report =
        lossfair::TrainNondiscriminatory(train->ds, lambda, ToKind(kind), c, {});
    if (!report.optimal()) {
      lossfair::Fail(lossfair::ErrorCode::kSolver,
                     std::string("solve ended with status ") +
                         lossfair::SolveStatusName(report.status));
    }
    *out = new lf_model{lossfair::LinearModel(report.theta.theta(), train->ds.name())};
  });
}

lf_status lf_audit(const lf_model* model, const lf_model* sqo, const lf_dataset* ds,
                   lf_audit_report* out) {
  return Guard([&] {
    Require(model && sqo && ds && out, "NULL argument");
    const auto& d = ds->ds;
    if (model->model.dim() != d.width() || sqo->model.dim() != d.width()) {
      lossfair::Fail(lossfair::ErrorCode::kData,
                     "model dimension " + std::to_string(model->model.dim()) +
                         " / status quo dimension " + std::to_string(sqo->model.dim()) +
                         " do not match the data width " + std::to_string(d.width()));
    }
    lf_audit_report r{};
    r.accuracy = lossfair::Accuracy(model->model, d);
    r.sqo_accuracy = lossfair::Accuracy(sqo->model, d);
    for (int k = 0; k < 2; ++k) {
      const auto kind = static_cast<lossfair::BenefitKind>(k);
      const bool usable = !d.GroupRows(kind, 0).empty() && !d.GroupRows(kind, 1).empty();
      if (!usable) {
        r.rates[k] = r.sqo_rates[k] = lf_group_rates{{kNaN, kNaN}, kNaN};
        r.proxy_slack[k] = kNaN;
        continue;
      }
      const auto m = lossfair::Evaluate(model->model, d, kind);
      const auto s = lossfair::Evaluate(sqo->model, d, kind);
      r.rates[k] = lf_group_rates{{m.benefit[0], m.benefit[1]}, m.disparity};
      r.sqo_rates[k] = lf_group_rates{{s.benefit[0], s.benefit[1]}, s.disparity};
      r.loss_averse[k] = m.benefit[0] >= s.benefit[0] && m.benefit[1] >= s.benefit[1];
      r.less_disparate[k] = m.disparity <= s.disparity;
      r.proxy_slack[k] =
          lossfair::LossAverseProxySlack(model->model, sqo->model, d, kind, 0.0);
    }
    *out = r;
  });
}

lf_status lf_experiment_load(const char* config_path, lf_experiment** out) {
  return Guard([&] {
    Require(out != nullptr && config_path != nullptr, "NULL argument");
    *out = nullptr;
    auto* h = new lf_experiment{lossfair::LoadExperimentConfig(config_path), {}};
    h->output_dir = h->cfg.output_dir.string();
    *out = h;
  });
}

lf_status lf_experiment_parse(const char* json_text, const char* base_dir,
                              lf_experiment** out) {
  return Guard([&] {
    Require(out != nullptr && json_text != nullptr, "NULL argument");
    *out = nullptr;
    auto* h = new lf_experiment{
        lossfair::ParseExperimentConfig(json_text, base_dir ? base_dir : ""), {}};
    h->output_dir = h->cfg.output_dir.string();
    *out = h;
  });
}

const char* lf_experiment_output_dir(const lf_experiment* exp) {
  return exp ? exp->output_dir.c_str() : "";
}

void lf_experiment_free(lf_experiment* exp) { delete exp; }

lf_status lf_experiment_run(const lf_experiment* exp, lf_result** out) {
  return Guard([&] {
    Require(out != nullptr && exp != nullptr, "NULL argument");
    *out = nullptr;
    auto* h = new lf_result{lossfair::RunExperiment(exp->cfg), {}, {}};
    h->records_csv = lossfair::RecordsCsv(h->result.records);
    h->aggregates_csv = lossfair::AggregatesCsv(h->result.aggregates);
    *out = h;
  });
}

lf_status lf_result_write(const lf_result* result, const lf_experiment* exp,
                          const char* dir) {
  return Guard([&] {
    Require(result != nullptr && exp != nullptr, "NULL argument");
    const std::filesystem::path target = dir ? std::filesystem::path(dir)
                                             : exp->cfg.output_dir;
    lossfair::EmitResults(result->result, target, exp->cfg.write_models);
  });
}

int64_t lf_result_cell_count(const lf_result* result) {
  return result ? static_cast<int64_t>(result->result.records.size()) : -1;
}

int64_t lf_result_optimal_count(const lf_result* result) {
  return result ? result->result.OptimalCells() : -1;
}

int lf_result_all_failed(const lf_result* result) {
  return result ? result->result.AllCellsFailed() : 0;
}

const char* lf_result_records_csv(const lf_result* result) {
  return result ? result->records_csv.c_str() : "";
}

const char* lf_result_aggregates_csv(const lf_result* result) {
  return result ? result->aggregates_csv.c_str() : "";
}

void lf_result_free(lf_result* result) { delete result; }

}  // extern "C"
