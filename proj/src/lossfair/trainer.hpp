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

#include <optional>
#include <vector>

#include "lossfair/constraints.hpp"
#include "lossfair/data.hpp"
#include "lossfair/metrics.hpp"
#include "lossfair/solver.hpp"

namespace lossfair {

// 10 log-spaced values over [1e-5, 1e-2].
std::vector<double> DefaultLambdaGrid();
std::vector<double> DefaultGammaGrid();

// The deployed classifier an update is measured against, with its training
// set benefits and mean signed distances cached per (kind, group).
struct StatusQuo {
  LinearModel model;
  double lambda = 0.0;
  double baseline_benefit[2][2] = {{0, 0}, {0, 0}};        // [kind][group]
  double baseline_mean_distance[2][2] = {{0, 0}, {0, 0}};  // [kind][group]
  SolveReport report;

  double Benefit(BenefitKind kind, int group) const {
    return baseline_benefit[static_cast<int>(kind)][group];
  }
  double MeanDistance(BenefitKind kind, int group) const {
    return baseline_mean_distance[static_cast<int>(kind)][group];
  }
};

// Picks the lambda whose unconstrained model has the highest validation
// accuracy; ties go to the larger lambda. Throws Error(kSolver) when no
// lambda reaches Optimal.
double SelectLambda(const Dataset& train, const Dataset& val,
                    const std::vector<double>& grid, const SolveOptions& opts);

// Unconstrained fit. Throws Error(kSolver) unless Optimal.
StatusQuo TrainStatusQuo(const Dataset& train, double lambda,
                         const SolveOptions& opts);

// Builds a StatusQuo from an existing model (no solve).
StatusQuo MakeStatusQuo(const LinearModel& model, const Dataset& train);

// |covariance proxy| of the status quo on train: the m = 1 threshold.
double ComputeCStar(const StatusQuo& sqo, const Dataset& train, BenefitKind kind);

SolveReport TrainNondiscriminatory(const Dataset& train, double lambda,
                                   BenefitKind kind, double c,
                                   const SolveOptions& opts,
                                   const Eigen::VectorXd* warm_start = nullptr);

struct GammaTrial {
  double gamma = 0.0;
  SolveReport report;
  double val_benefit[2] = {0.0, 0.0};
  double val_accuracy = 0.0;
  bool qualifies = false;  // Optimal and no validation benefit below the status quo
};

struct LossAverseResult {
  SolveReport report;
  double gamma = 0.0;
  // False when no gamma qualified and the best-effort fallback was returned.
  bool compliant = false;
  std::vector<GammaTrial> trials;
};

struct LossAverseOptions {
  // Require validation benefits strictly above the status quo's.
  bool strict_gain = false;
};

// One solve per gamma with the nondiscrimination rows plus the loss-averse
// rows. Among Optimal solves whose validation benefits are >= the status
// quo's for both groups, returns the one with the highest validation accuracy
// (ties: first gamma in grid order). Without such a solve, returns the Optimal
// solve with the largest minimum per-group benefit gain, flagged
// non-compliant. When no gamma reaches Optimal, report carries the first
// trial's non-Optimal status so callers can record the failure.
LossAverseResult TrainLossAverse(const Dataset& train, const Dataset& val,
                                 double lambda, BenefitKind kind, double c,
                                 const std::vector<double>& gamma_grid,
                                 const StatusQuo& sqo, const SolveOptions& opts,
                                 const Eigen::VectorXd* warm_start = nullptr,
                                 const LossAverseOptions& la_opts = {});

// Proxy-level compliance: min over groups of
//   mean d_theta - (mean d_sqo + gamma)
// on ds. Non-negative means the loss-averse rows hold.
double LossAverseProxySlack(const LinearModel& model, const LinearModel& sqo,
                            const Dataset& ds, BenefitKind kind, double gamma);

}  // namespace lossfair
