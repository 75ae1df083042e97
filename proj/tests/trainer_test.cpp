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
#include <random>

#include <gtest/gtest.h>

#include "lossfair/error.hpp"
#include "lossfair/trainer.hpp"
#include "test_util.hpp"

namespace lossfair {
namespace {

using testing::RandomDataset;

TEST(Grids, DefaultLambdaGridIsLogSpaced) {
  const std::vector<double> grid = DefaultLambdaGrid();
  ASSERT_EQ(grid.size(), 10u);
  EXPECT_NEAR(grid.front(), 1e-5, 1e-18);
  EXPECT_NEAR(grid.back(), 1e-2, 1e-15);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_NEAR(std::log10(grid[i]) - std::log10(grid[i - 1]), 1.0 / 3.0, 1e-12);
  }
  const std::vector<double> gammas = DefaultGammaGrid();
  ASSERT_FALSE(gammas.empty());
  EXPECT_EQ(gammas.front(), 0.0);
  EXPECT_TRUE(std::is_sorted(gammas.begin(), gammas.end()));
}

TEST(SelectLambda, TiesGoToLargerLambda) {
  // Separable data: every grid value classifies validation perfectly.
  const Dataset ds = testing::FourRows();
  EXPECT_EQ(SelectLambda(ds, ds, {1e-3, 1e-2, 1e-1}, SolveOptions{}), 1e-1);
  EXPECT_EQ(SelectLambda(ds, ds, {1e-1, 1e-2, 1e-3}, SolveOptions{}), 1e-1);
  EXPECT_THROW(SelectLambda(ds, ds, {}, SolveOptions{}), Error);
}

TEST(SelectLambda, PicksBestValidationAccuracy) {
  std::mt19937_64 rng(31);
  const Dataset train = RandomDataset(rng, 300, 3);
  const Dataset val = RandomDataset(rng, 200, 3);
  const std::vector<double> grid{1e-4, 1e-2, 10.0};
  const double chosen = SelectLambda(train, val, grid, SolveOptions{});
  double best = -1;
  for (double l : grid) {
    best = std::max(best, Accuracy(Minimize(train, l, {}, SolveOptions{}).theta, val));
  }
  EXPECT_EQ(Accuracy(Minimize(train, chosen, {}, SolveOptions{}).theta, val), best);
}

TEST(StatusQuo, CachesTrainingBenefitsAndDistances) {
  std::mt19937_64 rng(32);
  const Dataset train = RandomDataset(rng, 300, 2);
  const StatusQuo sqo = TrainStatusQuo(train, 1e-3, SolveOptions{});
  EXPECT_TRUE(sqo.report.optimal());
  EXPECT_EQ(sqo.lambda, 1e-3);
  for (BenefitKind kind : {BenefitKind::kAcceptanceRate, BenefitKind::kTruePositiveRate}) {
    for (int g : {0, 1}) {
      EXPECT_EQ(sqo.Benefit(kind, g), Benefit(sqo.model, train, kind, g));
      EXPECT_EQ(sqo.MeanDistance(kind, g), MeanSignedDistance(sqo.model, train, kind, g));
    }
    EXPECT_EQ(ComputeCStar(sqo, train, kind),
              std::abs(CovarianceProxy(sqo.model, train, kind)));
  }
}

TEST(Nondiscriminatory, ThresholdAtCStarLeavesStatusQuoUnchanged) {
  std::mt19937_64 rng(33);
  const Dataset train = RandomDataset(rng, 400, 3);
  const StatusQuo sqo = TrainStatusQuo(train, 1e-3, SolveOptions{});
  const double c_star = ComputeCStar(sqo, train, BenefitKind::kAcceptanceRate);
  const SolveReport r = TrainNondiscriminatory(train, 1e-3, BenefitKind::kAcceptanceRate,
                                               c_star, SolveOptions{});
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.objective, sqo.report.objective, 1e-9);
  EXPECT_LE((r.theta.theta() - sqo.model.theta()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Nondiscriminatory, ObjectiveGrowsAsThresholdTightens) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset train = RandomDataset(rng, 400, 2);
    const StatusQuo sqo = TrainStatusQuo(train, 1e-3, SolveOptions{});
    for (BenefitKind kind : {BenefitKind::kAcceptanceRate, BenefitKind::kTruePositiveRate}) {
      const double c_star = ComputeCStar(sqo, train, kind);
      double previous = sqo.report.objective;
      const Eigen::VectorXd* warm = &sqo.model.theta();
      SolveReport r;
      for (double m : {1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.0}) {
        r = TrainNondiscriminatory(train, 1e-3, kind, m * c_star, SolveOptions{}, warm);
        ASSERT_TRUE(r.optimal()) << "m=" << m;
        EXPECT_GE(r.objective, previous - 1e-9) << "m=" << m;
        EXPECT_LE(std::abs(CovarianceProxy(r.theta, train, kind)), m * c_star + 1e-6);
        previous = r.objective;
        warm = &r.theta.theta();
      }
    }
  }
}

TEST(LossAverse, ProxySlackHoldsForQualifyingSolves) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 4; ++trial) {
    const Dataset train = RandomDataset(rng, 400, 2);
    const Dataset val = RandomDataset(rng, 200, 2);
    const StatusQuo sqo = TrainStatusQuo(train, 1e-3, SolveOptions{});
    const BenefitKind kind =
        trial % 2 ? BenefitKind::kAcceptanceRate : BenefitKind::kTruePositiveRate;
    const double c = 0.2 * ComputeCStar(sqo, train, kind);
    const LossAverseResult r =
        TrainLossAverse(train, val, 1e-3, kind, c, {0.0, 0.1, 0.5}, sqo, SolveOptions{});
    ASSERT_EQ(r.trials.size(), 3u);
    for (const GammaTrial& t : r.trials) {
      if (!t.report.optimal()) continue;
      EXPECT_GE(LossAverseProxySlack(t.report.theta, sqo.model, train, kind, t.gamma), -1e-6);
      EXPECT_EQ(t.val_accuracy, Accuracy(t.report.theta, val));
    }
    if (r.compliant) {
      EXPECT_TRUE(r.report.optimal());
      // The winner has the best validation accuracy among qualifying trials.
      for (const GammaTrial& t : r.trials) {
        if (t.qualifies) {
          EXPECT_LE(t.val_accuracy, Accuracy(r.report.theta, val));
        }
      }
      for (int g : {0, 1}) {
        EXPECT_GE(Benefit(r.report.theta, val, kind, g), Benefit(sqo.model, val, kind, g));
      }
    }
  }
}

TEST(LossAverse, UnsatisfiableGammaFallsBackToNonCompliant) {
  std::mt19937_64 rng(36);
  const Dataset train = RandomDataset(rng, 300, 2);
  const StatusQuo sqo = TrainStatusQuo(train, 1e-3, SolveOptions{});
  // Zero covariance plus a huge required gain and an iteration cap: nothing
  // can qualify.
  SolveOptions opts;
  opts.max_outer_iterations = 1;
  const LossAverseResult r = TrainLossAverse(train, train, 1e-3, BenefitKind::kAcceptanceRate,
                                             0.0, {0.0}, sqo, opts);
  EXPECT_FALSE(r.compliant);
  EXPECT_FALSE(r.report.optimal());
}

TEST(LossAverse, ProxySlackMatchesDefinition) {
  const Dataset ds = testing::FourRows();
  const LinearModel sqo(Eigen::Vector2d(1, 0));
  const LinearModel m(Eigen::Vector2d(1, 1));
  // Mean distances: sqo (0.5, -1), m (1.5, 0). Gains 1 and 1, minus gamma.
  EXPECT_NEAR(LossAverseProxySlack(m, sqo, ds, BenefitKind::kAcceptanceRate, 0.25), 0.75, 1e-15);
  // D+ rows are x = 2 (z0) and x = 1 (z1): gains are 1 in both groups.
  EXPECT_NEAR(LossAverseProxySlack(m, sqo, ds, BenefitKind::kTruePositiveRate, 0.0), 1.0, 1e-15);
}

}  // namespace
}  // namespace lossfair
