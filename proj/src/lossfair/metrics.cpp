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

#include "lossfair/metrics.hpp"

#include <cmath>

#include "lossfair/error.hpp"

namespace lossfair {
namespace {

void CheckWidth(const LinearModel& model, Index width) {
  if (model.dim() != width) {
    Fail(ErrorCode::kInvalidArgument,
         "model dimension " + std::to_string(model.dim()) +
             " does not match feature width " + std::to_string(width));
  }
}

const char* SubsetName(BenefitKind kind) {
  return kind == BenefitKind::kAcceptanceRate ? "D_{z=k}" : "D+_{z=k}";
}

}  // namespace

LinearModel::LinearModel(Eigen::VectorXd theta, std::string tag)
    : theta_(std::move(theta)), tag_(std::move(tag)) {
  if (!theta_.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "model: non-finite parameter");
  }
}

double LinearModel::SignedDistance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  CheckWidth(*this, x.size());
  return theta_.dot(x);
}

Eigen::VectorXd LinearModel::SignedDistances(const Dataset& ds) const {
  CheckWidth(*this, ds.width());
  return ds.features() * theta_;
}

int LinearModel::Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return SignedDistance(x) >= 0.0 ? 1 : -1;
}

double SignedDistance(const LinearModel& model,
                      const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.SignedDistance(x);
}

double Benefit(const LinearModel& model, const Dataset& ds, BenefitKind kind,
               int group) {
  const auto rows = ds.GroupRows(kind, group);
  if (rows.empty()) {
    Fail(ErrorCode::kData, std::string("benefit: empty subset ") +
                               SubsetName(kind) + " for k=" +
                               std::to_string(group));
  }
  const Eigen::VectorXd d = model.SignedDistances(ds);
  Index accepted = 0;
  for (Index r : rows) accepted += d[r] >= 0.0 ? 1 : 0;
  return static_cast<double>(accepted) / static_cast<double>(rows.size());
}

double Accuracy(const LinearModel& model, const Dataset& ds) {
  if (ds.rows() == 0) Fail(ErrorCode::kData, "accuracy: empty dataset");
  const Eigen::VectorXd d = model.SignedDistances(ds);
  Index correct = 0;
  for (Index i = 0; i < ds.rows(); ++i) {
    const double yhat = d[i] >= 0.0 ? 1.0 : -1.0;
    correct += yhat == ds.labels()[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.rows());
}

double Disparity(const LinearModel& model, const Dataset& ds, BenefitKind kind) {
  return std::abs(Benefit(model, ds, kind, 0) - Benefit(model, ds, kind, 1));
}

Eigen::VectorXd CovarianceDirection(const Dataset& ds, BenefitKind kind) {
  const auto rows = ds.ConditioningRows(kind);
  if (rows.empty()) {
    Fail(ErrorCode::kData, "covariance: empty summation set");
  }
  const double count = static_cast<double>(rows.size());
  double zbar = 0.0;
  for (Index r : rows) zbar += ds.sensitive()[r];
  zbar /= count;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ds.width());
  for (Index r : rows) {
    v.noalias() += (ds.sensitive()[r] - zbar) * ds.features().row(r).transpose();
  }
  return v / count;
}

double CovarianceProxy(const LinearModel& model, const Dataset& ds,
                       BenefitKind kind) {
  CheckWidth(model, ds.width());
  return CovarianceDirection(ds, kind).dot(model.theta());
}

Eigen::VectorXd GroupMeanFeatures(const Dataset& ds, BenefitKind kind, int group) {
  const auto rows = ds.GroupRows(kind, group);
  if (rows.empty()) {
    Fail(ErrorCode::kData, std::string("group mean: empty subset ") +
                               SubsetName(kind) + " for k=" +
                               std::to_string(group));
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(ds.width());
  for (Index r : rows) u.noalias() += ds.features().row(r).transpose();
  return u / static_cast<double>(rows.size());
}

double MeanSignedDistance(const LinearModel& model, const Dataset& ds,
                          BenefitKind kind, int group) {
  CheckWidth(model, ds.width());
  return GroupMeanFeatures(ds, kind, group).dot(model.theta());
}

GroupReport Evaluate(const LinearModel& model, const Dataset& ds, BenefitKind kind) {
  GroupReport r;
  r.accuracy = Accuracy(model, ds);
  r.benefit[0] = Benefit(model, ds, kind, 0);
  r.benefit[1] = Benefit(model, ds, kind, 1);
  r.disparity = std::abs(r.benefit[0] - r.benefit[1]);
  return r;
}

}  // namespace lossfair
