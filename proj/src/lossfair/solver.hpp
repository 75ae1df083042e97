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

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "lossfair/constraints.hpp"
#include "lossfair/data.hpp"
#include "lossfair/metrics.hpp"

namespace lossfair {

// One line of optional solver tracing, emitted once per outer iteration.
struct TraceRecord {
  int outer_iteration = 0;
  int inner_iterations = 0;  // cumulative
  double objective = 0.0;
  double max_violation = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double penalty = 0.0;
};

std::string TraceRecordToJsonLine(const TraceRecord& record);

struct SolveOptions {
  double kkt_tolerance = 1e-6;
  double feasibility_tolerance = 1e-6;
  int max_outer_iterations = 200;
  int max_inner_iterations = 500;
  double penalty_growth = 10.0;
  double initial_penalty = 10.0;
  // When false the bias (last coordinate) is left out of the L2 penalty.
  bool regularize_bias = true;
  std::function<void(const TraceRecord&)> trace;

  void Validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kIterationLimit };

const char* SolveStatusName(SolveStatus status);

struct SolveReport {
  LinearModel theta;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kIterationLimit;
  // max(stationarity, complementarity) at the returned point.
  double kkt_residual = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double max_constraint_violation = 0.0;
  Eigen::VectorXd multipliers;  // one per constraint row, >= 0
  int outer_iterations = 0;
  int inner_iterations = 0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// L2-regularized mean logistic loss:
//   -(1/N) sum log sigma(y_i theta . x_i) + lambda ||theta||^2
// With regularize_bias false the norm skips the last (bias) coordinate.
double Objective(const Dataset& ds, const Eigen::VectorXd& theta, double lambda,
                 bool regularize_bias = true);
Eigen::VectorXd Gradient(const Dataset& ds, const Eigen::VectorXd& theta,
                         double lambda, bool regularize_bias = true);
Eigen::MatrixXd Hessian(const Dataset& ds, const Eigen::VectorXd& theta,
                        double lambda, bool regularize_bias = true);

// ||grad f + A^T mu||_inf and max |mu_i (a_i . theta - b_i)|.
double Stationarity(const Dataset& ds, const Eigen::VectorXd& theta, double lambda,
                    const ConstraintSet& constraints,
                    const Eigen::VectorXd& multipliers, bool regularize_bias = true);
double Complementarity(const Eigen::VectorXd& theta,
                       const ConstraintSet& constraints,
                       const Eigen::VectorXd& multipliers);

struct FeasibilityResult {
  Eigen::VectorXd point;
  double max_violation = 0.0;
  bool feasible = false;
};

// Phase one: minimizes (1/2) sum max(0, a_i . theta - b_i)^2 from start and
// reports the largest remaining violation. The system is feasible within
// tolerance iff that violation is <= tolerance.
FeasibilityResult FindFeasiblePoint(const ConstraintSet& constraints,
                                    const Eigen::VectorXd& start,
                                    double tolerance);

// Minimizes Objective subject to every row of constraints. Starts from
// warm_start when given (must match the dataset width), else from zero.
SolveReport Minimize(const Dataset& ds, double lambda,
                     const ConstraintSet& constraints, const SolveOptions& opts,
                     const Eigen::VectorXd* warm_start = nullptr);

}  // namespace lossfair
