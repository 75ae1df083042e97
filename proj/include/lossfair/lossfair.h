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

#ifndef LOSSFAIR_LOSSFAIR_H_
#define LOSSFAIR_LOSSFAIR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LOSSFAIR_BUILDING_LIBRARY)
#define LF_API __attribute__((visibility("default")))
#else
#define LF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
  LF_OK = 0,
  LF_INVALID_ARGUMENT = 1,
  LF_CONFIG_ERROR = 2,
  LF_IO_ERROR = 3,
  LF_DATA_ERROR = 4,
  LF_SOLVER_ERROR = 5,
  LF_INTERNAL_ERROR = 6
} lf_status;

typedef enum lf_benefit_kind {
  LF_ACCEPTANCE_RATE = 0,   /* statistical parity */
  LF_TRUE_POSITIVE_RATE = 1 /* equality of opportunity */
} lf_benefit_kind;

typedef struct lf_dataset lf_dataset;
typedef struct lf_model lf_model;
typedef struct lf_experiment lf_experiment;
typedef struct lf_result lf_result;

/* Message of the last failed call on this thread; never NULL. */
LF_API const char* lf_last_error(void);
LF_API const char* lf_status_name(lf_status status);
LF_API const char* lf_version(void);

/* Datasets. The bias column is appended by the library. */
LF_API lf_status lf_dataset_generate(lf_benefit_kind kind, int64_t n, uint64_t seed,
                                     lf_dataset** out);
LF_API lf_status lf_dataset_load_csv(const char* csv_path, const char* schema_path,
                                     lf_dataset** out);
LF_API lf_status lf_dataset_write_csv(const lf_dataset* ds, const char* path);
LF_API int64_t lf_dataset_rows(const lf_dataset* ds);
/* Feature count including the bias column. */
LF_API int64_t lf_dataset_width(const lf_dataset* ds);
LF_API int64_t lf_dataset_group_count(const lf_dataset* ds, int group);
LF_API void lf_dataset_free(lf_dataset* ds);

/* Models. */
LF_API lf_status lf_model_create(const double* theta, int64_t dim, const char* tag,
                                 lf_model** out);
LF_API lf_status lf_model_load(const char* path, lf_model** out);
LF_API lf_status lf_model_save(const lf_model* model, const char* path);
LF_API int64_t lf_model_dim(const lf_model* model);
/* Copies min(dim, capacity) weights into out; returns the model dimension. */
LF_API int64_t lf_model_theta(const lf_model* model, double* out, int64_t capacity);
LF_API void lf_model_free(lf_model* model);

/* Unconstrained L2-regularized logistic regression. */
LF_API lf_status lf_train_status_quo(const lf_dataset* train, double lambda,
                                     lf_model** out);
/* Covariance-constrained fit with threshold c >= 0. */
LF_API lf_status lf_train_nondiscriminatory(const lf_dataset* train, double lambda,
                                           lf_benefit_kind kind, double c,
                                           lf_model** out);

typedef struct lf_group_rates {
  double benefit[2]; /* indexed by group z */
  double disparity;
} lf_group_rates;

typedef struct lf_audit_report {
  double accuracy;
  double sqo_accuracy;
  lf_group_rates rates[2];     /* [kind] for the model */
  lf_group_rates sqo_rates[2]; /* [kind] for the status quo */
  /* Mean signed distance minus the status quo's, min over groups, per kind.
     Non-negative means the convex loss-averse rows hold with gamma = 0. */
  double proxy_slack[2];
  /* 1 when both group benefits are >= the status quo's, per kind. */
  int loss_averse[2];
  /* 1 when the model's disparity is <= the status quo's, per kind. */
  int less_disparate[2];
} lf_audit_report;

/* Benefit kinds whose conditioning subset is empty report NaN rates and 0
   flags. */
LF_API lf_status lf_audit(const lf_model* model, const lf_model* sqo,
                          const lf_dataset* ds, lf_audit_report* out);

/* Experiments. */
LF_API lf_status lf_experiment_load(const char* config_path, lf_experiment** out);
LF_API lf_status lf_experiment_parse(const char* json_text, const char* base_dir,
                                     lf_experiment** out);
LF_API const char* lf_experiment_output_dir(const lf_experiment* exp);
LF_API void lf_experiment_free(lf_experiment* exp);

LF_API lf_status lf_experiment_run(const lf_experiment* exp, lf_result** out);
/* Writes into the configured output directory when dir is NULL. */
LF_API lf_status lf_result_write(const lf_result* result, const lf_experiment* exp,
                                 const char* dir);
LF_API int64_t lf_result_cell_count(const lf_result* result);
LF_API int64_t lf_result_optimal_count(const lf_result* result);
LF_API int lf_result_all_failed(const lf_result* result);
/* records.csv contents; valid until the result is freed. */
LF_API const char* lf_result_records_csv(const lf_result* result);
LF_API const char* lf_result_aggregates_csv(const lf_result* result);
LF_API void lf_result_free(lf_result* result);

#ifdef __cplusplus
}
#endif

#endif  // LOSSFAIR_LOSSFAIR_H_
