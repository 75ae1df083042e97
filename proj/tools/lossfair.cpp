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

// lossfair command-line tool.
//
//   lossfair run   --config <path>
//   lossfair gen   --dataset sp|eop --n <int> --seed <int> --out <csv>
//   lossfair audit --model <file> --sqo <file> --data <csv> --schema <file>
//
// Exit codes: 0 success, 1 config or usage error, 2 data or IO error,
// 3 every experiment cell failed to reach Optimal.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "lossfair/lossfair.h"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kAllCellsFailed = 3 };

int ExitFor(lf_status status) {
  switch (status) {
    case LF_OK:
      return kOk;
    case LF_INVALID_ARGUMENT:
    case LF_CONFIG_ERROR:
      return kConfigError;
    case LF_SOLVER_ERROR:
      return kAllCellsFailed;
    default:
      return kDataError;
  }
}

int Report(lf_status status, const char* what) {
  std::fprintf(stderr, "lossfair: %s: %s: %s\n", what, lf_status_name(status),
               lf_last_error());
  return ExitFor(status);
}

struct Deleter {
  void operator()(lf_dataset* p) const { lf_dataset_free(p); }
  void operator()(lf_model* p) const { lf_model_free(p); }
  void operator()(lf_experiment* p) const { lf_experiment_free(p); }
  void operator()(lf_result* p) const { lf_result_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, Deleter>;

int Run(const std::string& config_path, const std::string& out_override) {
  lf_experiment* exp_raw = nullptr;
  lf_status st = lf_experiment_load(config_path.c_str(), &exp_raw);
  if (st != LF_OK) return Report(st, "loading config");
  Handle<lf_experiment> exp(exp_raw);

  lf_result* res_raw = nullptr;
  st = lf_experiment_run(exp.get(), &res_raw);
  if (st != LF_OK) return Report(st, "running experiment");
  Handle<lf_result> res(res_raw);

  const char* dir = out_override.empty() ? nullptr : out_override.c_str();
  st = lf_result_write(res.get(), exp.get(), dir);
  if (st != LF_OK) return Report(st, "writing results");

  std::printf("%lld cells, %lld Optimal; results in %s\n",
              static_cast<long long>(lf_result_cell_count(res.get())),
              static_cast<long long>(lf_result_optimal_count(res.get())),
              dir ? dir : lf_experiment_output_dir(exp.get()));
  std::fputs(lf_result_aggregates_csv(res.get()), stdout);
  if (lf_result_all_failed(res.get())) {
    std::fprintf(stderr, "lossfair: no cell reached Optimal\n");
    return kAllCellsFailed;
  }
  return kOk;
}

int Gen(const std::string& dataset, long long n, unsigned long long seed,
        const std::string& out) {
  const lf_benefit_kind kind = dataset == "sp" ? LF_ACCEPTANCE_RATE : LF_TRUE_POSITIVE_RATE;
  if (n <= 0) n = dataset == "sp" ? 6000 : 16000;
  lf_dataset* raw = nullptr;
  lf_status st = lf_dataset_generate(kind, n, seed, &raw);
  if (st != LF_OK) return Report(st, "generating data");
  Handle<lf_dataset> ds(raw);
  st = lf_dataset_write_csv(ds.get(), out.c_str());
  if (st != LF_OK) return Report(st, "writing csv");
  std::printf("wrote %lld rows (z=0: %lld, z=1: %lld) to %s\n",
              static_cast<long long>(lf_dataset_rows(ds.get())),
              static_cast<long long>(lf_dataset_group_count(ds.get(), 0)),
              static_cast<long long>(lf_dataset_group_count(ds.get(), 1)), out.c_str());
  return kOk;
}

void PrintRates(const char* label, const lf_group_rates& m, const lf_group_rates& s) {
  std::printf("  %-4s model   z0=%.4f  z1=%.4f  disparity=%.4f\n", label, m.benefit[0],
              m.benefit[1], m.disparity);
  std::printf("  %-4s sqo     z0=%.4f  z1=%.4f  disparity=%.4f\n", label, s.benefit[0],
              s.benefit[1], s.disparity);
}

int Audit(const std::string& model_path, const std::string& sqo_path,
          const std::string& data_path, const std::string& schema_path) {
  lf_model* raw_model = nullptr;
  lf_model* raw_sqo = nullptr;
  lf_dataset* raw_ds = nullptr;
  lf_status st = lf_model_load(model_path.c_str(), &raw_model);
  if (st != LF_OK) return Report(st, "loading model");
  Handle<lf_model> model(raw_model);
  st = lf_model_load(sqo_path.c_str(), &raw_sqo);
  if (st != LF_OK) return Report(st, "loading status quo");
  Handle<lf_model> sqo(raw_sqo);
  st = lf_dataset_load_csv(data_path.c_str(), schema_path.c_str(), &raw_ds);
  if (st != LF_OK) {
    return Report(st, st == LF_CONFIG_ERROR ? "loading schema" : "loading data");
  }
  Handle<lf_dataset> ds(raw_ds);

  lf_audit_report r{};
  st = lf_audit(model.get(), sqo.get(), ds.get(), &r);
  if (st != LF_OK) return Report(st, "auditing");

  std::printf("rows %lld  accuracy model=%.4f sqo=%.4f\n",
              static_cast<long long>(lf_dataset_rows(ds.get())), r.accuracy,
              r.sqo_accuracy);
  const char* names[2] = {"AR", "TPR"};
  for (int k = 0; k < 2; ++k) {
    if (std::isnan(r.rates[k].disparity)) {
      std::printf("%s: not defined on this data\n", names[k]);
      continue;
    }
    std::printf("%s:\n", names[k]);
    PrintRates(names[k], r.rates[k], r.sqo_rates[k]);
    std::printf("  loss-averse (no group benefit below status quo): %s\n",
                r.loss_averse[k] ? "yes" : "no");
    std::printf("  disparity not above status quo: %s\n",
                r.less_disparate[k] ? "yes" : "no");
    std::printf("  mean-distance slack vs status quo: %.6g\n", r.proxy_slack[k]);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-averse fair classifier updates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lf_version()));

  std::string config_path, out_override;
  auto* run = app.add_subcommand("run", "Run an experiment sweep from a JSON config");
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_override, "Override the configured output directory");

  std::string dataset, out_csv;
  long long n = 0;
  unsigned long long seed = 0;
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset as CSV");
  gen->add_option("--dataset", dataset, "sp or eop")
      ->required()
      ->check(CLI::IsMember({"sp", "eop"}));
  gen->add_option("--n", n, "Number of rows (default 6000 for sp, 16000 for eop)");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out_csv, "Output CSV path")->required();

  std::string model_path, sqo_path, data_path, schema_path;
  auto* audit = app.add_subcommand("audit", "Compare a model with a status quo on data");
  audit->add_option("--model", model_path, "Model file")->required();
  audit->add_option("--sqo", sqo_path, "Status quo model file")->required();
  audit->add_option("--data", data_path, "CSV data")->required();
  audit->add_option("--schema", schema_path, "Schema JSON for the CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run) return Run(config_path, out_override);
  if (*gen) return Gen(dataset, n, seed, out_csv);
  return Audit(model_path, sqo_path, data_path, schema_path);
}
