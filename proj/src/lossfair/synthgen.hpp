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

#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "lossfair/data.hpp"

namespace lossfair {

// A 2-d Gaussian. The covariance must be symmetric positive definite.
struct GaussianSpec {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();

  // Throws Error(kInvalidArgument) when cov is asymmetric or not PD.
  void Validate() const;
  double LogDensity(const Eigen::Vector2d& x) const;
};

struct SynthConfig {
  Index n = 6000;
  std::uint64_t seed = 0;
  // Rotation applied before evaluating the z-assignment densities (SP set).
  // -pi/4 yields the 3280 / 2720 protected / non-protected split.
  double phi = -std::numbers::pi / 4.0;
  // Mean of the (z = 0, y = +1) cell of the EOP set.
  Eigen::Vector2d eop_protected_positive_mean{-1.0, 0.0};

  void Validate() const;
};

// Draws count i.i.d. rows: mean + L * standard normals with cov = L L^T.
Eigen::MatrixX2d SampleMvn(const GaussianSpec& spec, Index count,
                           std::uint64_t seed);
Eigen::MatrixX2d SampleMvn(const GaussianSpec& spec, Index count,
                           std::mt19937_64& rng);

// Statistical-parity benchmark: y uniform, x | y Gaussian, and
// P(z = 1 | x) = p(R x | y=+1) / (p(R x | y=+1) + p(R x | y=-1)) with R the
// rotation by phi.
Dataset GenerateSpDataset(const SynthConfig& cfg);
GaussianSpec SpClassConditional(int label);

// Equality-of-opportunity benchmark: y and z uniform and independent,
// x | (z, y) Gaussian per cell. Cells are stated after the label flip that
// turns a false-positive disparity into a true-positive one:
//   y = -1 (either group): N([2;2], [3 1; 1 3])
//   z = 0, y = +1:         N(cfg.eop_protected_positive_mean, [3 2; 2 3])
//   z = 1, y = +1:         N([-2;-2], [3 1; 1 3])
Dataset GenerateEopDataset(const SynthConfig& cfg);
GaussianSpec EopCellConditional(int group, int label, const SynthConfig& cfg);

}  // namespace lossfair
