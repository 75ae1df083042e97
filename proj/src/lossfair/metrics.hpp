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

#include <string>

#include <Eigen/Dense>

#include "lossfair/data.hpp"

namespace lossfair {

// Linear decision boundary; the bias is the weight of the constant column.
class LinearModel {
 public:
  LinearModel() = default;
  explicit LinearModel(Eigen::VectorXd theta, std::string tag = {});

  static LinearModel Zero(Index dim) { return LinearModel(Eigen::VectorXd::Zero(dim)); }

  const Eigen::VectorXd& theta() const { return theta_; }
  Index dim() const { return theta_.size(); }
  const std::string& tag() const { return tag_; }

  // d(x) = theta . x. Throws on dimension mismatch.
  double SignedDistance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // Distances for every row of ds.
  Eigen::VectorXd SignedDistances(const Dataset& ds) const;
  // +1 iff d(x) >= 0.
  int Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  Eigen::VectorXd theta_;
  std::string tag_;
};

double SignedDistance(const LinearModel& model,
                      const Eigen::Ref<const Eigen::VectorXd>& x);

// Fraction of predicted positives among D_{z=group} (AR) or D+_{z=group}
// (TPR). Throws Error(kData) when that subset is empty.
double Benefit(const LinearModel& model, const Dataset& ds, BenefitKind kind,
               int group);

double Accuracy(const LinearModel& model, const Dataset& ds);

// |B_0 - B_1|
double Disparity(const LinearModel& model, const Dataset& ds, BenefitKind kind);

// (1/|S|) sum_S (z - zbar_S) d(x) with S = D (AR) or D+ (TPR) and zbar_S the
// mean of z over S. Signed; linear in theta.
double CovarianceProxy(const LinearModel& model, const Dataset& ds,
                       BenefitKind kind);

// The vector v with CovarianceProxy(theta) = v . theta.
Eigen::VectorXd CovarianceDirection(const Dataset& ds, BenefitKind kind);

// Mean feature vector of D_{z=group} (AR) or D+_{z=group} (TPR); its dot
// product with theta is the group's mean signed distance.
Eigen::VectorXd GroupMeanFeatures(const Dataset& ds, BenefitKind kind, int group);

double MeanSignedDistance(const LinearModel& model, const Dataset& ds,
                          BenefitKind kind, int group);

struct GroupReport {
  double accuracy = 0.0;
  double benefit[2] = {0.0, 0.0};
  double disparity = 0.0;
};

GroupReport Evaluate(const LinearModel& model, const Dataset& ds, BenefitKind kind);

}  // namespace lossfair
