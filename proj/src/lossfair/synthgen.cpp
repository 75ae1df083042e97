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

#include "lossfair/synthgen.hpp"

#include <cmath>

#include "lossfair/error.hpp"

namespace lossfair {
namespace {

Eigen::Matrix2d Cov(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

Eigen::Matrix2d CholeskyFactor(const GaussianSpec& spec) {
  spec.Validate();
  return spec.cov.llt().matrixL();
}

}  // namespace

void GaussianSpec::Validate() const {
  if (!mean.allFinite() || !cov.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "gaussian: non-finite parameter");
  }
  if (cov(0, 1) != cov(1, 0)) {
    Fail(ErrorCode::kInvalidArgument, "gaussian: covariance is not symmetric");
  }
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success || cov.determinant() <= 0.0) {
    Fail(ErrorCode::kInvalidArgument,
         "gaussian: covariance is not positive definite");
  }
}

double GaussianSpec::LogDensity(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d diff = x - mean;
  const double quad = diff.dot(cov.ldlt().solve(diff));
  return -0.5 * quad - std::log(2.0 * std::numbers::pi) -
         0.5 * std::log(cov.determinant());
}

void SynthConfig::Validate() const {
  if (n <= 0) Fail(ErrorCode::kInvalidArgument, "synth: n must be positive");
  if (!std::isfinite(phi)) Fail(ErrorCode::kInvalidArgument, "synth: phi not finite");
  if (!eop_protected_positive_mean.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "synth: mean not finite");
  }
}

Eigen::MatrixX2d SampleMvn(const GaussianSpec& spec, Index count,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SampleMvn(spec, count, rng);
}

Eigen::MatrixX2d SampleMvn(const GaussianSpec& spec, Index count,
                           std::mt19937_64& rng) {
  if (count < 0) Fail(ErrorCode::kInvalidArgument, "sample: negative count");
  const Eigen::Matrix2d chol = CholeskyFactor(spec);
  std::normal_distribution<double> normal;
  Eigen::MatrixX2d out(count, 2);
  for (Index i = 0; i < count; ++i) {
    Eigen::Vector2d e;
    e[0] = normal(rng);
    e[1] = normal(rng);
    out.row(i) = (spec.mean + chol * e).transpose();
  }
  return out;
}

GaussianSpec SpClassConditional(int label) {
  if (label > 0) return {Eigen::Vector2d(2.0, 2.0), Cov(5, 1, 1, 5)};
  return {Eigen::Vector2d(-2.0, -2.0), Cov(10, 1, 1, 3)};
}

Dataset GenerateSpDataset(const SynthConfig& cfg) {
  cfg.Validate();
  const GaussianSpec pos = SpClassConditional(+1);
  const GaussianSpec neg = SpClassConditional(-1);
  const Eigen::Matrix2d chol_pos = CholeskyFactor(pos);
  const Eigen::Matrix2d chol_neg = CholeskyFactor(neg);
  Eigen::Matrix2d rotation;
  rotation << std::cos(cfg.phi), -std::sin(cfg.phi), std::sin(cfg.phi),
      std::cos(cfg.phi);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd x(cfg.n, 2);
  Eigen::VectorXd y(cfg.n);
  Eigen::VectorXd z(cfg.n);
  for (Index i = 0; i < cfg.n; ++i) {
    const bool positive = uniform(rng) < 0.5;
    Eigen::Vector2d e;
    e[0] = normal(rng);
    e[1] = normal(rng);
    const Eigen::Vector2d xi =
        positive ? Eigen::Vector2d(pos.mean + chol_pos * e)
                 : Eigen::Vector2d(neg.mean + chol_neg * e);
    const Eigen::Vector2d rotated = rotation * xi;
    // P(z=1) = p1 / (p1 + p0), evaluated in log space.
    const double log_ratio = neg.LogDensity(rotated) - pos.LogDensity(rotated);
    const double p_z1 = 1.0 / (1.0 + std::exp(log_ratio));
    x.row(i) = xi.transpose();
    y[i] = positive ? 1.0 : -1.0;
    z[i] = uniform(rng) < p_z1 ? 1.0 : 0.0;
  }
  return Dataset::FromRaw(x, std::move(y), std::move(z), "synthetic-sp",
                          {"x1", "x2"}, {0, 1});
}

GaussianSpec EopCellConditional(int group, int label, const SynthConfig& cfg) {
  if (label < 0) return {Eigen::Vector2d(2.0, 2.0), Cov(3, 1, 1, 3)};
  if (group == 0) return {cfg.eop_protected_positive_mean, Cov(3, 2, 2, 3)};
  return {Eigen::Vector2d(-2.0, -2.0), Cov(3, 1, 1, 3)};
}

Dataset GenerateEopDataset(const SynthConfig& cfg) {
  cfg.Validate();
  // [group][label > 0]
  GaussianSpec cells[2][2];
  Eigen::Matrix2d chol[2][2];
  for (int g = 0; g < 2; ++g) {
    for (int l = 0; l < 2; ++l) {
      cells[g][l] = EopCellConditional(g, l ? +1 : -1, cfg);
      chol[g][l] = CholeskyFactor(cells[g][l]);
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd x(cfg.n, 2);
  Eigen::VectorXd y(cfg.n);
  Eigen::VectorXd z(cfg.n);
  for (Index i = 0; i < cfg.n; ++i) {
    const int l = uniform(rng) < 0.5 ? 1 : 0;
    const int g = uniform(rng) < 0.5 ? 1 : 0;
    Eigen::Vector2d e;
    e[0] = normal(rng);
    e[1] = normal(rng);
    x.row(i) = (cells[g][l].mean + chol[g][l] * e).transpose();
    y[i] = l ? 1.0 : -1.0;
    z[i] = static_cast<double>(g);
  }
  return Dataset::FromRaw(x, std::move(y), std::move(z), "synthetic-eop",
                          {"x1", "x2"}, {0, 1});
}

}  // namespace lossfair
