// Copyright 2026 The rpdhg Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rpdhg/ahr.h"

#include <cmath>
#include <sstream>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "rpdhg/errors.h"
#include "test_util.h"

namespace rpdhg {
namespace {

ClpInstance TwoVar() {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Vec b(1), c(2);
  b << 1;
  c << 1, 0;
  return MakeInstance("two_var", SparseMatrix::FromDense(a), b, c,
                      ConeSpec::NonNeg(2));
}

AhrConfig Scripted(std::vector<double> eps) {
  AhrConfig cfg;
  cfg.deterministic = true;
  cfg.t0 = 1e-6;
  cfg.learn_steps = false;
  cfg.max_final_iters = 2000;
  cfg.eps_override = [eps](int round, double measured) {
    return round <= static_cast<int>(eps.size()) ? eps[round - 1] : measured;
  };
  return cfg;
}

TEST(AhrConfigTest, Validation) {
  AhrConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  EXPECT_NEAR(cfg.EpsBar(), 1e-4, 1e-18);
  EXPECT_NEAR(cfg.EpsHat(), std::pow(1e-8, 0.2), 1e-15);
  cfg.eps_bar = 0.5;
  EXPECT_THROW(cfg.Validate(), InputError);
  AhrConfig bad_t;
  bad_t.t0 = 0.0;
  EXPECT_THROW(bad_t.Validate(), InputError);
}

TEST(AhrTest, AcceptPathOnFirstRound) {
  const AhrResult res = SolveAhr(TwoVar(), Scripted({1e-5}));
  ASSERT_EQ(res.rounds.size(), 1u);
  EXPECT_EQ(res.exit, AhrExit::kAcceptNew);
  EXPECT_EQ(res.fixed_round, 1);
  EXPECT_EQ(res.rounds[0].decision, AhrDecision::kAcceptNew);
}

TEST(AhrTest, RevertPathKeepsPreviousRescaling) {
  const AhrResult res = SolveAhr(testing::Pnu(1e-4), Scripted({1e-3, 1e-2}));
  ASSERT_EQ(res.rounds.size(), 2u);
  EXPECT_EQ(res.exit, AhrExit::kRevert);
  EXPECT_EQ(res.fixed_round, 1);
  EXPECT_EQ(res.rounds[0].decision, AhrDecision::kContinue);
  EXPECT_EQ(res.rounds[1].decision, AhrDecision::kRevert);
  EXPECT_EQ(res.rescaling.eta, res.rounds[0].eta);
}

TEST(AhrTest, NoRevertAboveEpsHat) {
  // eps_1 = 0.5 exceeds eps_hat, so the rise to 0.9 does not revert.
  const AhrResult res =
      SolveAhr(testing::Pnu(1e-4), Scripted({0.5, 0.9, 1e-5}));
  ASSERT_EQ(res.rounds.size(), 3u);
  EXPECT_EQ(res.rounds[1].decision, AhrDecision::kContinue);
  EXPECT_EQ(res.exit, AhrExit::kAcceptNew);
  EXPECT_EQ(res.fixed_round, 3);
}

TEST(AhrTest, BudgetDoublesEachRound) {
  const AhrResult res =
      SolveAhr(testing::Pnu(1e-4), Scripted({0.5, 0.4, 0.3, 1e-5}));
  ASSERT_EQ(res.rounds.size(), 4u);
  for (size_t k = 0; k < res.rounds.size(); ++k) {
    EXPECT_EQ(res.rounds[k].round, static_cast<int>(k) + 1);
    EXPECT_DOUBLE_EQ(res.rounds[k].t, 1e-6 * std::pow(2.0, k));
  }
}

TEST(AhrTest, WarmStartIsTransformedIpmIterate) {
  const ClpInstance p = testing::Pnu(1e-4);
  const AhrConfig cfg = Scripted({0.5, 1e-5});
  const AhrResult res = SolveAhr(p, cfg);
  for (const AhrRound& rd : res.rounds) {
    HessianOptions ho;
    ho.mode = EtaMode::kAhr;
    Rescaling r = HessianRescaling(p, {rd.ipm_x, rd.ipm_y, rd.ipm_s}, ho);
    EXPECT_EQ(r.eta, rd.eta);
    r = WithRuizPc(p, r);
    const RescaledInstance ri = BuildRescaled(p, r, true);
    const PdhgPoint warm = MapForward(ri, rd.ipm_x, rd.ipm_y);
    EXPECT_NEAR((Project(p.cone, warm.x) - rd.warm_x).norm(), 0.0,
                1e-10 * (1 + warm.x.norm()));
    EXPECT_NEAR((warm.y - rd.warm_y).norm(), 0.0, 1e-10 * (1 + warm.y.norm()));
  }
}

TEST(AhrTest, SolvesToyLpToTolerance) {
  AhrConfig cfg;
  cfg.deterministic = true;
  cfg.t0 = 1e-6;
  cfg.learn_steps = false;
  const AhrResult res = SolveAhr(TwoVar(), cfg);
  ASSERT_EQ(res.result.status, SolveStatus::kOptimal);
  EXPECT_LE(RelativeError(TwoVar(), res.result.x, res.result.y), 1e-8);
  EXPECT_NEAR(res.result.x[1], 1.0, 1e-6);
}

TEST(AhrTest, FallbackOnSecondOrderCone) {
  ClpInstance inst = TwoVar();
  inst.cone = ConeSpec::SecondOrder(2);
  inst.c[0] = 0.0;
  inst.c[1] = 1.0;
  AhrConfig cfg;
  cfg.deterministic = true;
  cfg.learn_steps = false;
  cfg.max_final_iters = 1000;
  const AhrResult res = SolveAhr(inst, cfg);
  EXPECT_EQ(res.exit, AhrExit::kFallback);
  EXPECT_EQ(res.fixed_round, 0);
}

TEST(AhrTest, RoundLogCsv) {
  const AhrResult res = SolveAhr(TwoVar(), Scripted({1e-5}));
  const std::string csv = RoundLogToCsv(res.rounds);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "round,t_ipm_s,ipm_mu,eps_k,decision");
  EXPECT_EQ(row.substr(0, 2), "1,");
  EXPECT_NE(row.find("accept-new"), std::string::npos);
}

TEST(IdealTest, BudgetsAndReportRoundTrip) {
  const std::vector<double> budgets = IdealBudgets(4);
  ASSERT_EQ(budgets.size(), 4u);
  EXPECT_DOUBLE_EQ(budgets[0], 0.5);
  EXPECT_DOUBLE_EQ(budgets[3], 4.0);

  AhrConfig cfg;
  cfg.deterministic = true;
  cfg.learn_steps = false;
  const IdealReport rep = IdealSweep(TwoVar(), cfg, {1e-6});
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_TRUE(rep.entries[0].solved);
  EXPECT_EQ(rep.best, 0);
  const IdealReport back = IdealReportFromJson(IdealReportToJson(rep));
  EXPECT_EQ(back.instance, rep.instance);
  EXPECT_EQ(back.best, rep.best);
  ASSERT_EQ(back.entries.size(), 1u);
  EXPECT_EQ(back.entries[0].pdhg_iterations, rep.entries[0].pdhg_iterations);
  EXPECT_EQ(back.entries[0].budget_s, rep.entries[0].budget_s);
}

}  // namespace
}  // namespace rpdhg
