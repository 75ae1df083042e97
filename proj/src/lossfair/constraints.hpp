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

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lossfair/data.hpp"
#include "lossfair/metrics.hpp"

namespace lossfair {

inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

// a . theta <= b
struct AffineConstraint {
  Eigen::VectorXd a;
  double b = 0.0;
  std::string tag;

  // a . theta - b; positive means violated.
  double Slack(const Eigen::VectorXd& theta) const { return a.dot(theta) - b; }
  bool SatisfiedBy(const Eigen::VectorXd& theta, double tolerance = 0.0) const {
    return Slack(theta) <= tolerance;
  }
};

class ConstraintSet {
 public:
  ConstraintSet() = default;

  void Add(AffineConstraint row);
  void Append(const ConstraintSet& other);

  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  // -1 when empty.
  Index dim() const { return rows_.empty() ? -1 : rows_.front().a.size(); }
  const std::vector<AffineConstraint>& rows() const { return rows_; }
  const AffineConstraint& operator[](std::size_t i) const { return rows_[i]; }

  // Rows stacked as A theta <= b.
  Eigen::MatrixXd Matrix() const;
  Eigen::VectorXd Bounds() const;

  // max(0, max_i a_i . theta - b_i); 0 for an empty set.
  double MaxViolation(const Eigen::VectorXd& theta) const;

 private:
  std::vector<AffineConstraint> rows_;
};

// |v . theta| <= c, split into +v . theta <= c and -v . theta <= c, with v the
// covariance direction over D. c = kUnconstrained returns an empty set.
ConstraintSet StatisticalParityConstraint(const Dataset& ds, double c);

// Same over D+ (positive labels only).
ConstraintSet EqualOpportunityConstraint(const Dataset& ds, double c);

// Dispatches on kind.
ConstraintSet NondiscriminationConstraint(const Dataset& ds, BenefitKind kind,
                                          double c);

// For k in {0, 1}: mean_{D_{z=k}} d_theta >= mean_{D_{z=k}} d_sqo + gamma,
// stored as -u_k . theta <= -(u_k . theta_sqo + gamma).
ConstraintSet LossAverseAcceptanceConstraint(const Dataset& ds,
                                             const LinearModel& status_quo,
                                             double gamma);

// Same over D+_{z=k}.
ConstraintSet LossAverseTruePositiveConstraint(const Dataset& ds,
                                               const LinearModel& status_quo,
                                               double gamma);

ConstraintSet LossAverseConstraint(const Dataset& ds, BenefitKind kind,
                                   const LinearModel& status_quo, double gamma);

}  // namespace lossfair
