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

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "lossfair/constraints.hpp"
#include "lossfair/data.hpp"
#include "lossfair/solver.hpp"

namespace lossfair::testing {

// Regularized logistic loss summed in long double, without the library's
// softplus.
inline long double ExtendedObjective(const Dataset& ds, const Eigen::VectorXd& theta,
                                     long double lambda) {
  long double sum = 0.0L;
  for (Index i = 0; i < ds.rows(); ++i) {
    long double m = 0.0L;
    for (Index j = 0; j < ds.width(); ++j) {
      m += static_cast<long double>(ds.features()(i, j)) * theta[j];
    }
    m *= ds.labels()[i];
    sum += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  long double norm = 0.0L;
  for (Index j = 0; j < theta.size(); ++j) norm += (long double)theta[j] * theta[j];
  return sum / ds.rows() + lambda * norm;
}

// Central differences of ExtendedObjective.
inline Eigen::VectorXd FiniteDifferenceGradient(const Dataset& ds, const Eigen::VectorXd& t,
                                                double lambda) {
  Eigen::VectorXd fd(t.size());
  for (Index j = 0; j < t.size(); ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(t[j]));
    Eigen::VectorXd up = t, down = t;
    up[j] += h;
    down[j] -= h;
    fd[j] = static_cast<double>((ExtendedObjective(ds, up, lambda) -
                                 ExtendedObjective(ds, down, lambda)) /
                                (2.0L * h));
  }
  return fd;
}

// Brute force over a zooming 101^3 grid of theta (two features plus bias);
// returns the best strictly feasible objective.
inline double GridMinimum(const Dataset& ds, double lambda, const ConstraintSet& cs,
                          Eigen::Vector3d center, double half_width) {
  constexpr int kPoints = 101;
  double best = std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd a = cs.Matrix();
  const Eigen::VectorXd b = cs.Bounds();
  for (int level = 0; level < 6; ++level) {
    const double step = 2.0 * half_width / (kPoints - 1);
    Eigen::Vector3d best_point = center;
    for (int i = 0; i < kPoints; ++i) {
      for (int j = 0; j < kPoints; ++j) {
        for (int k = 0; k < kPoints; ++k) {
          const Eigen::Vector3d t = center + step * Eigen::Vector3d(i - 50, j - 50, k - 50);
          if (cs.size() > 0 && ((a * t - b).array() > 0.0).any()) continue;
          const double f = Objective(ds, t, lambda);
          if (f < best) {
            best = f;
            best_point = t;
          }
        }
      }
    }
    center = best_point;
    half_width /= 8.0;
  }
  return best;
}

}  // namespace lossfair::testing
