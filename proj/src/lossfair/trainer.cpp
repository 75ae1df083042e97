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

#include "lossfair/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lossfair/error.hpp"

namespace lossfair {

std::vector<double> DefaultLambdaGrid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) {
    grid.push_back(std::pow(10.0, -5.0 + 3.0 * i / 9.0));
  }
  return grid;
}

std::vector<double> DefaultGammaGrid() { return {0.0, 0.05, 0.1, 0.2, 0.5, 1.0}; }

double SelectLambda(const Dataset& train, const Dataset& val,
                    const std::vector<double>& grid, const SolveOptions& opts) {
  if (grid.empty()) Fail(ErrorCode::kInvalidArgument, "lambda grid is empty");
  if (train.rows() == 0 || val.rows() == 0) {
    Fail(ErrorCode::kData, "select lambda: empty split");
  }
  double best_lambda = 0.0;
  double best_accuracy = -1.0;
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(train.width());
  for (double lambda : grid) {
    const SolveReport r = Minimize(train, lambda, {}, opts, &warm);
    if (!r.optimal()) continue;
    warm = r.theta.theta();
    const double acc = Accuracy(r.theta, val);
    if (acc > best_accuracy || (acc == best_accuracy && lambda > best_lambda)) {
      best_accuracy = acc;
      best_lambda = lambda;
    }
  }
  if (best_accuracy < 0.0) {
    Fail(ErrorCode::kSolver, "select lambda: no grid value reached Optimal");
  }
  return best_lambda;
}

StatusQuo MakeStatusQuo(const LinearModel& model, const Dataset& train) {
  StatusQuo sqo;
  sqo.model = model;
  for (BenefitKind kind : {BenefitKind::kAcceptanceRate, BenefitKind::kTruePositiveRate}) {
    for (int k = 0; k < 2; ++k) {
      // A group without positive rows has no TPR; leave NaN.
      if (train.GroupRows(kind, k).empty()) {
        sqo.baseline_benefit[static_cast<int>(kind)][k] =
            std::numeric_limits<double>::quiet_NaN();
        sqo.baseline_mean_distance[static_cast<int>(kind)][k] =
            std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      sqo.baseline_benefit[static_cast<int>(kind)][k] = Benefit(model, train, kind, k);
      sqo.baseline_mean_distance[static_cast<int>(kind)][k] =
          MeanSignedDistance(model, train, kind, k);
    }
  }
  return sqo;
}

StatusQuo TrainStatusQuo(const Dataset& train, double lambda,
                         const SolveOptions& opts) {
  SolveReport r = Minimize(train, lambda, {}, opts);
  if (!r.optimal()) {
    Fail(ErrorCode::kSolver, std::string("status quo solve ended with status ") +
                                 SolveStatusName(r.status));
  }
  StatusQuo sqo = MakeStatusQuo(r.theta, train);
  sqo.lambda = lambda;
  sqo.report = std::move(r);
  return sqo;
}

double ComputeCStar(const StatusQuo& sqo, const Dataset& train, BenefitKind kind) {
  return std::abs(CovarianceProxy(sqo.model, train, kind));
}

SolveReport TrainNondiscriminatory(const Dataset& train, double lambda,
                                   BenefitKind kind, double c,
                                   const SolveOptions& opts,
                                   const Eigen::VectorXd* warm_start) {
  return Minimize(train, lambda, NondiscriminationConstraint(train, kind, c), opts,
                  warm_start);
}

double LossAverseProxySlack(const LinearModel& model, const LinearModel& sqo,
                            const Dataset& ds, BenefitKind kind, double gamma) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    const double gain =
        MeanSignedDistance(model, ds, kind, k) - MeanSignedDistance(sqo, ds, kind, k);
    worst = std::min(worst, gain - gamma);
  }
  return worst;
}

LossAverseResult TrainLossAverse(const Dataset& train, const Dataset& val,
                                 double lambda, BenefitKind kind, double c,
                                 const std::vector<double>& gamma_grid,
                                 const StatusQuo& sqo, const SolveOptions& opts,
                                 const Eigen::VectorXd* warm_start,
                                 const LossAverseOptions& la_opts) {
  if (gamma_grid.empty()) Fail(ErrorCode::kInvalidArgument, "gamma grid is empty");
  const ConstraintSet nondisc = NondiscriminationConstraint(train, kind, c);
  const double sqo_val[2] = {Benefit(sqo.model, val, kind, 0),
                             Benefit(sqo.model, val, kind, 1)};

  LossAverseResult out;
  for (double gamma : gamma_grid) {
    ConstraintSet rows = nondisc;
    rows.Append(LossAverseConstraint(train, kind, sqo.model, gamma));
    GammaTrial trial;
    trial.gamma = gamma;
    trial.report = Minimize(train, lambda, rows, opts, warm_start);
    if (trial.report.optimal()) {
      trial.val_benefit[0] = Benefit(trial.report.theta, val, kind, 0);
      trial.val_benefit[1] = Benefit(trial.report.theta, val, kind, 1);
      trial.val_accuracy = Accuracy(trial.report.theta, val);
      bool ok = true;
      for (int k = 0; k < 2; ++k) {
        ok = ok && (la_opts.strict_gain ? trial.val_benefit[k] > sqo_val[k]
                                        : trial.val_benefit[k] >= sqo_val[k]);
      }
      trial.qualifies = ok;
    }
    out.trials.push_back(std::move(trial));
  }

  const GammaTrial* winner = nullptr;
  for (const auto& t : out.trials) {
    if (t.qualifies && (winner == nullptr || t.val_accuracy > winner->val_accuracy)) {
      winner = &t;
    }
  }
  out.compliant = winner != nullptr;
  if (winner == nullptr) {
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const auto& t : out.trials) {
      if (!t.report.optimal()) continue;
      const double gain = std::min(t.val_benefit[0] - sqo_val[0],
                                   t.val_benefit[1] - sqo_val[1]);
      if (winner == nullptr || gain > best_gain) {
        best_gain = gain;
        winner = &t;
      }
    }
  }
  if (winner == nullptr) {
    // Surface the status of the first attempt for the caller to record.
    out.report = out.trials.front().report;
    out.gamma = out.trials.front().gamma;
    return out;
  }
  out.report = winner->report;
  out.gamma = winner->gamma;
  return out;
}

}  // namespace lossfair
