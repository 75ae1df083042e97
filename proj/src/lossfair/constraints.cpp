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

#include "lossfair/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "lossfair/error.hpp"

namespace lossfair {
namespace {

void RequireBothGroups(const Dataset& ds, BenefitKind kind, const char* what) {
  for (int k = 0; k < 2; ++k) {
    if (ds.GroupRows(kind, k).empty()) {
      Fail(ErrorCode::kData, std::string(what) + ": group z=" +
                                 std::to_string(k) +
                                 (kind == BenefitKind::kTruePositiveRate
                                      ? " has no positive-label rows"
                                      : " is empty"));
    }
  }
}

ConstraintSet CovarianceRows(const Dataset& ds, BenefitKind kind, double c,
                             const char* tag) {
  if (std::isnan(c) || c < 0.0) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(tag) + ": threshold c must be >= 0");
  }
  if (std::isinf(c)) return {};
  RequireBothGroups(ds, kind, tag);
  const Eigen::VectorXd v = CovarianceDirection(ds, kind);
  ConstraintSet set;
  set.Add({v, c, std::string(tag) + ":upper"});
  set.Add({-v, c, std::string(tag) + ":lower"});
  return set;
}

}  // namespace

void ConstraintSet::Add(AffineConstraint row) {
  if (!row.a.allFinite() || !std::isfinite(row.b)) {
    Fail(ErrorCode::kInvalidArgument, "constraint '" + row.tag + "' is not finite");
  }
  if (!rows_.empty() && row.a.size() != dim()) {
    Fail(ErrorCode::kInvalidArgument, "constraint '" + row.tag +
                                          "' has dimension " +
                                          std::to_string(row.a.size()) +
                                          ", expected " + std::to_string(dim()));
  }
  rows_.push_back(std::move(row));
}

void ConstraintSet::Append(const ConstraintSet& other) {
  for (const auto& row : other.rows_) Add(row);
}

Eigen::MatrixXd ConstraintSet::Matrix() const {
  Eigen::MatrixXd a(static_cast<Index>(rows_.size()), std::max<Index>(dim(), 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    a.row(static_cast<Index>(i)) = rows_[i].a.transpose();
  }
  return a;
}

Eigen::VectorXd ConstraintSet::Bounds() const {
  Eigen::VectorXd b(static_cast<Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) b[static_cast<Index>(i)] = rows_[i].b;
  return b;
}

double ConstraintSet::MaxViolation(const Eigen::VectorXd& theta) const {
  double worst = 0.0;
  for (const auto& row : rows_) worst = std::max(worst, row.Slack(theta));
  return worst;
}

ConstraintSet StatisticalParityConstraint(const Dataset& ds, double c) {
  return CovarianceRows(ds, BenefitKind::kAcceptanceRate, c, "sp-cov");
}

ConstraintSet EqualOpportunityConstraint(const Dataset& ds, double c) {
  return CovarianceRows(ds, BenefitKind::kTruePositiveRate, c, "eop-cov");
}

ConstraintSet NondiscriminationConstraint(const Dataset& ds, BenefitKind kind,
                                          double c) {
  return kind == BenefitKind::kAcceptanceRate ? StatisticalParityConstraint(ds, c)
                                              : EqualOpportunityConstraint(ds, c);
}

ConstraintSet LossAverseConstraint(const Dataset& ds, BenefitKind kind,
                                   const LinearModel& status_quo, double gamma) {
  const char* tag = kind == BenefitKind::kAcceptanceRate ? "loss-averse-ar"
                                                         : "loss-averse-tpr";
  if (!std::isfinite(gamma) || gamma < 0.0) {
    Fail(ErrorCode::kInvalidArgument, std::string(tag) + ": gamma must be >= 0");
  }
  if (status_quo.dim() != ds.width()) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(tag) + ": status-quo dimension mismatch");
  }
  RequireBothGroups(ds, kind, tag);
  ConstraintSet set;
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXd u = GroupMeanFeatures(ds, kind, k);
    const double baseline = u.dot(status_quo.theta());
    set.Add({-u, -(baseline + gamma), std::string(tag) + ":z" + std::to_string(k)});
  }
  return set;
}

ConstraintSet LossAverseAcceptanceConstraint(const Dataset& ds,
                                             const LinearModel& status_quo,
                                             double gamma) {
  return LossAverseConstraint(ds, BenefitKind::kAcceptanceRate, status_quo, gamma);
}

ConstraintSet LossAverseTruePositiveConstraint(const Dataset& ds,
                                               const LinearModel& status_quo,
                                               double gamma) {
  return LossAverseConstraint(ds, BenefitKind::kTruePositiveRate, status_quo, gamma);
}

}  // namespace lossfair
