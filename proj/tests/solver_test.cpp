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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "json.hpp"
#include "lossfair/constraints.hpp"
#include "lossfair/error.hpp"
#include "lossfair/solver.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace lossfair {
namespace {

using testing::ExtendedObjective;
using testing::GridMinimum;
using testing::RandomDataset;

Eigen::VectorXd RandomTheta(std::mt19937_64& rng, Index d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd t(d);
  for (Index j = 0; j < d; ++j) t[j] = normal(rng);
  return t;
}

// Independent KKT check from the reported multipliers.
void ExpectKkt(const Dataset& ds, double lambda, const ConstraintSet& cs,
               const SolveReport& r, bool regularize_bias = true) {
  ASSERT_TRUE(r.optimal());
  const Eigen::VectorXd& t = r.theta.theta();
  EXPECT_LE(cs.MaxViolation(t), 1e-6);
  Eigen::VectorXd g = Gradient(ds, t, lambda, regularize_bias);
  if (!cs.empty()) {
    ASSERT_EQ(r.multipliers.size(), Index(cs.size()));
    EXPECT_GE(r.multipliers.minCoeff(), 0.0);
    g += cs.Matrix().transpose() * r.multipliers;
  }
  EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE(Complementarity(t, cs, r.multipliers), 1e-6);
  EXPECT_LE(r.kkt_residual, 1e-6);
}

TEST(Objective, ClosedFormValues) {
  const Dataset ds = testing::FourRows();
  EXPECT_NEAR(Objective(ds, Eigen::Vector2d::Zero(), 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(Objective(ds, Eigen::Vector2d::Zero(), 3.0), std::log(2.0), 1e-15);

  Eigen::MatrixXd raw(1, 1);
  raw << 10;
  const Dataset one =
      Dataset::FromRaw(raw, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), "one");
  EXPECT_NEAR(Objective(one, Eigen::Vector2d(1, 0), 0.0), 4.539889921686465e-05, 1e-19);
  // Large margins must not overflow.
  EXPECT_NEAR(Objective(one, Eigen::Vector2d(-100, 0), 0.0), 1000.0, 1e-9);
}

TEST(Objective, MatchesExtendedPrecisionSum) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = RandomDataset(rng, 300, 4);
    const Eigen::VectorXd t = RandomTheta(rng, ds.width(), 3.0);
    const double lambda = 1e-3 * (trial + 1);
    const long double oracle = ExtendedObjective(ds, t, lambda);
    EXPECT_NEAR(Objective(ds, t, lambda), static_cast<double>(oracle),
                1e-13 * std::abs(static_cast<double>(oracle)));
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = RandomDataset(rng, 60 + trial, 1 + trial % 5);
    const Eigen::VectorXd t = RandomTheta(rng, ds.width(), 1.5);
    const double lambda = trial % 3 == 0 ? 0.0 : 0.01 * trial;
    const Eigen::VectorXd g = Gradient(ds, t, lambda);
    const Eigen::VectorXd fd = testing::FiniteDifferenceGradient(ds, t, lambda);
    const double rel = (g - fd).norm() / std::max(1e-8, fd.norm());
    EXPECT_LE(rel, 1e-5) << "instance " << trial;
  }
}

TEST(Gradient, RegularizerContributesTwoLambdaTheta) {
  std::mt19937_64 rng(3);
  const Dataset ds = RandomDataset(rng, 50, 3);
  const Eigen::VectorXd t = RandomTheta(rng, ds.width(), 1.0);
  const Eigen::VectorXd diff = Gradient(ds, t, 0.7) - Gradient(ds, t, 0.0);
  EXPECT_LE((diff - 1.4 * t).cwiseAbs().maxCoeff(), 1e-14);

  const Eigen::VectorXd no_bias = Gradient(ds, t, 0.7, false) - Gradient(ds, t, 0.0);
  EXPECT_NEAR(no_bias[t.size() - 1], 0.0, 1e-15);
  EXPECT_LE((no_bias.head(t.size() - 1) - 1.4 * t.head(t.size() - 1)).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_NEAR(Objective(ds, t, 0.7) - Objective(ds, t, 0.7, false),
              0.7 * t[t.size() - 1] * t[t.size() - 1], 1e-14);
}

TEST(Gradient, SymmetricFixtureHasZeroBiasComponent) {
  // Label-balanced and symmetric in x: the loss gradient at zero has no bias part.
  Eigen::MatrixXd raw(4, 1);
  raw << 1, -1, 2, -2;
  Eigen::VectorXd y(4), z(4);
  y << 1, -1, 1, -1;
  z << 0, 0, 1, 1;
  const Dataset ds = Dataset::FromRaw(raw, y, z, "sym");
  EXPECT_NEAR(Gradient(ds, Eigen::Vector2d::Zero(), 0.0)[1], 0.0, 1e-16);
}

TEST(Hessian, MatchesDifferencedGradient) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = RandomDataset(rng, 80, 3);
    const Eigen::VectorXd t = RandomTheta(rng, ds.width(), 1.0);
    const Eigen::MatrixXd h = Hessian(ds, t, 0.05);
    for (Index j = 0; j < t.size(); ++j) {
      Eigen::VectorXd up = t, down = t;
      up[j] += 1e-6;
      down[j] -= 1e-6;
      const Eigen::VectorXd col = (Gradient(ds, up, 0.05) - Gradient(ds, down, 0.05)) / 2e-6;
      EXPECT_LE((col - h.col(j)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Minimize, UnconstrainedOptimumSatisfiesKkt) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = RandomDataset(rng, 200, 3);
    const SolveReport r = Minimize(ds, 1e-3, {}, SolveOptions{});
    ExpectKkt(ds, 1e-3, {}, r);
    EXPECT_NEAR(r.objective, Objective(ds, r.theta.theta(), 1e-3), 1e-12);
  }
}

TEST(Minimize, ConstrainedOptimaSatisfyKkt) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int optimal = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset ds = RandomDataset(rng, 250, 1 + trial % 4);
    const double lambda = 1e-4 * (1 + trial % 7);
    const SolveReport sqo = Minimize(ds, lambda, {}, SolveOptions{});
    ASSERT_TRUE(sqo.optimal());
    const BenefitKind kind =
        trial % 2 ? BenefitKind::kAcceptanceRate : BenefitKind::kTruePositiveRate;
    const double c_star = std::abs(CovarianceProxy(sqo.theta, ds, kind));
    ConstraintSet cs = NondiscriminationConstraint(ds, kind, unit(rng) * c_star);
    if (trial % 3 == 0) cs.Append(LossAverseConstraint(ds, kind, sqo.theta, 0.05 * unit(rng)));
    const SolveReport r = Minimize(ds, lambda, cs, SolveOptions{}, &sqo.theta.theta());
    if (r.optimal()) {
      ++optimal;
      ExpectKkt(ds, lambda, cs, r);
      EXPECT_GE(r.objective, sqo.objective - 1e-12);
    }
  }
  EXPECT_GE(optimal, 27);
}

TEST(Minimize, AgreesWithGridBruteForceOnTwoFeatures) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.2, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = RandomDataset(rng, 24, 2);
    const double lambda = 0.02;
    const SolveReport sqo = Minimize(ds, lambda, {}, SolveOptions{});
    ASSERT_TRUE(sqo.optimal());
    const BenefitKind kind =
        trial % 2 ? BenefitKind::kAcceptanceRate : BenefitKind::kTruePositiveRate;
    const double c = unit(rng) * std::abs(CovarianceProxy(sqo.theta, ds, kind));
    ConstraintSet cs = NondiscriminationConstraint(ds, kind, c);
    if (trial % 2 == 0) cs.Append(LossAverseConstraint(ds, kind, sqo.theta, 0.05));
    const SolveReport r = Minimize(ds, lambda, cs, SolveOptions{});
    ASSERT_TRUE(r.optimal()) << "instance " << trial;
    const double grid = GridMinimum(ds, lambda, cs, Eigen::Vector3d::Zero(), 8.0);
    EXPECT_LE(std::abs(grid - r.objective), 1e-3) << "instance " << trial;
    // The solver may sit up to the feasibility tolerance outside; the grid never does.
    EXPECT_LE(r.objective, grid + 1e-6) << "instance " << trial;
  }
}

TEST(Minimize, ContradictoryRowsAreInfeasible) {
  std::mt19937_64 rng(8);
  const Dataset ds = RandomDataset(rng, 50, 2);
  ConstraintSet cs;
  cs.Add({Eigen::Vector3d(1, 0, 0), -1.0, "w0 <= -1"});
  cs.Add({Eigen::Vector3d(-1, 0, 0), -1.0, "w0 >= 1"});
  const SolveReport r = Minimize(ds, 1e-3, cs, SolveOptions{});
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_NEAR(r.max_constraint_violation, 1.0, 1e-6);
}

TEST(Minimize, IterationLimitIsReported) {
  std::mt19937_64 rng(9);
  const Dataset ds = RandomDataset(rng, 200, 2);
  const SolveReport sqo = Minimize(ds, 1e-3, {}, SolveOptions{});
  const ConstraintSet cs = NondiscriminationConstraint(ds, BenefitKind::kAcceptanceRate, 0.0);
  SolveOptions opts;
  opts.max_outer_iterations = 1;
  const SolveReport r = Minimize(ds, 1e-3, cs, opts, &sqo.theta.theta());
  EXPECT_EQ(r.status, SolveStatus::kIterationLimit);
  EXPECT_EQ(r.outer_iterations, 1);
}

TEST(Minimize, WarmStartReachesSameOptimum) {
  std::mt19937_64 rng(10);
  const Dataset ds = RandomDataset(rng, 300, 3);
  const ConstraintSet cs = NondiscriminationConstraint(ds, BenefitKind::kAcceptanceRate, 0.01);
  const SolveReport cold = Minimize(ds, 1e-3, cs, SolveOptions{});
  const Eigen::VectorXd start = RandomTheta(rng, ds.width(), 2.0);
  const SolveReport warm = Minimize(ds, 1e-3, cs, SolveOptions{}, &start);
  ASSERT_TRUE(cold.optimal());
  ASSERT_TRUE(warm.optimal());
  EXPECT_NEAR(cold.objective, warm.objective, 1e-9);
  EXPECT_LE((cold.theta.theta() - warm.theta.theta()).cwiseAbs().maxCoeff(), 1e-4);

  const Eigen::VectorXd wrong = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(Minimize(ds, 1e-3, cs, SolveOptions{}, &wrong), Error);
}

TEST(Minimize, UnregularizedBiasSolveSatisfiesKkt) {
  std::mt19937_64 rng(11);
  const Dataset ds = RandomDataset(rng, 300, 2);
  SolveOptions opts;
  opts.regularize_bias = false;
  const SolveReport sqo = Minimize(ds, 1e-2, {}, opts);
  ExpectKkt(ds, 1e-2, {}, sqo, false);
  ConstraintSet cs = NondiscriminationConstraint(ds, BenefitKind::kTruePositiveRate, 0.0);
  cs.Append(LossAverseConstraint(ds, BenefitKind::kTruePositiveRate, sqo.theta, 1.0));
  const SolveReport r = Minimize(ds, 1e-2, cs, opts, &sqo.theta.theta());
  ExpectKkt(ds, 1e-2, cs, r, false);
}

TEST(Minimize, RejectsBadArguments) {
  const Dataset ds = testing::FourRows();
  EXPECT_THROW(Minimize(ds, -1.0, {}, SolveOptions{}), Error);
  ConstraintSet cs;
  cs.Add({Eigen::Vector3d(1, 0, 0), 0.0, "wide"});
  EXPECT_THROW(Minimize(ds, 0.1, cs, SolveOptions{}), Error);
  SolveOptions bad;
  bad.kkt_tolerance = 0.0;
  EXPECT_THROW(Minimize(ds, 0.1, {}, bad), Error);
}

TEST(FindFeasiblePoint, HandlesNearlyParallelRows) {
  // An equality pair plus two half-spaces whose normals almost coincide once
  // restricted to the equality plane. Feasible at (0, 0, 4).
  ConstraintSet cs;
  cs.Add({Eigen::Vector3d(-0.2375, -0.4928, 0), 0.0, "eq+"});
  cs.Add({Eigen::Vector3d(0.2375, 0.4928, 0), 0.0, "eq-"});
  cs.Add({Eigen::Vector3d(1.0103, -0.0221, -1), -2.3372, "h0"});
  cs.Add({Eigen::Vector3d(1.9604, 1.9492, -1), -4.0043, "h1"});
  ASSERT_LE(cs.MaxViolation(Eigen::Vector3d(0, 0, 4.1)), 0.0);
  const FeasibilityResult r = FindFeasiblePoint(cs, Eigen::Vector3d(-1.5, 2.0, -0.5), 1e-6);
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.max_violation, 1e-6);
  EXPECT_LT(r.point.norm(), 1e3);
}

TEST(FindFeasiblePoint, FeasibleStartIsKept) {
  ConstraintSet cs;
  cs.Add({Eigen::Vector2d(1, 1), 1.0, "r"});
  const Eigen::Vector2d start(0.2, 0.3);
  const FeasibilityResult r = FindFeasiblePoint(cs, start, 1e-6);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.point, Eigen::VectorXd(start));
}

TEST(Trace, OneJsonLinePerOuterIteration) {
  std::mt19937_64 rng(12);
  const Dataset ds = RandomDataset(rng, 100, 2);
  const ConstraintSet cs = NondiscriminationConstraint(ds, BenefitKind::kAcceptanceRate, 0.0);
  std::vector<std::string> lines;
  SolveOptions opts;
  opts.trace = [&](const TraceRecord& rec) { lines.push_back(TraceRecordToJsonLine(rec)); };
  const SolveReport r = Minimize(ds, 1e-3, cs, opts);
  ASSERT_EQ(Index(lines.size()), r.outer_iterations);
  const auto last = nlohmann::json::parse(lines.back());
  EXPECT_EQ(last.at("outer").get<int>(), r.outer_iterations);
  EXPECT_NEAR(last.at("objective").get<double>(), r.objective, 1e-12);
}

}  // namespace
}  // namespace lossfair
