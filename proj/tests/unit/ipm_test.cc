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


#include "rpdhg/ipm.h"

#include <cmath>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "rpdhg/errors.h"
#include "rpdhg/rescale.h"
#include "test_util.h"

namespace rpdhg {
namespace {

// min x1  s.t.  x1 + x2 = 1, x >= 0; optimum (0, 1).
ClpInstance TwoVar() {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Vec b(1), c(2);
  b << 1;
  c << 1, 0;
  return MakeInstance("two_var", SparseMatrix::FromDense(a), b, c,
                      ConeSpec::NonNeg(2));
}

void ExpectStrictlyDecreasing(const std::vector<double>& v) {
  for (size_t k = 1; k < v.size(); ++k) EXPECT_LT(v[k], v[k - 1]) << k;
}

TEST(CpCgmTest, TwoVariableLp) {
  IpmBudget budget;
  budget.time_limit_s = 1.0;
  budget.target_rel_error = 1e-6;
  const IpmResult res = CpCgm(TwoVar(), budget);
  EXPECT_EQ(res.status, IpmStatus::kTargetReached);
  EXPECT_LE(res.iterate.relative_error, 1e-6);
  EXPECT_NEAR(res.iterate.x[0], 0.0, 1e-5);
  EXPECT_NEAR(res.iterate.x[1], 1.0, 1e-5);
  EXPECT_GT(res.iterate.x.minCoeff(), 0.0);
  EXPECT_GT(res.iterate.s.minCoeff(), 0.0);
  ExpectStrictlyDecreasing(res.state.mu_history);
}

TEST(CpCgmTest, PnuStaysInteriorWithDecreasingGap) {
  const ClpInstance p = testing::Pnu(1e-4);
  IpmBudget budget;
  budget.deterministic = true;
  budget.time_limit_s = 1.0;
  budget.target_rel_error = 1e-4;
  IpmState state;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 8; ++round) {
    budget.time_limit_s = 2e-6;
    const IpmResult res = CpCgm(p, budget, round == 0 ? nullptr : &state);
    state = res.state;
    EXPECT_GT(res.iterate.x.minCoeff(), 0.0);
    EXPECT_GT(res.iterate.s.minCoeff(), 0.0);
    const double gap = res.iterate.s.dot(res.iterate.x);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
    if (res.status == IpmStatus::kTargetReached) break;
  }
  ExpectStrictlyDecreasing(state.mu_history);
}

TEST(CpCgmTest, ResumeThroughJsonMatchesSingleRun) {
  const ClpInstance inst = testing::RandomLp(21, 4, 9);
  IpmBudget budget;
  budget.deterministic = true;
  budget.target_rel_error = 0.0;
  budget.time_limit_s = 3e-5;
  const IpmResult first = CpCgm(inst, budget);
  const IpmState restored = IpmStateFromJson(IpmStateToJson(first.state));
  const IpmResult second = CpCgm(inst, budget, &restored);
  budget.time_limit_s = 6e-5;
  const IpmResult once = CpCgm(inst, budget);
  EXPECT_EQ(second.state.outer, once.state.outer);
  EXPECT_EQ(second.iterate.x, once.iterate.x);
  EXPECT_EQ(second.iterate.y, once.iterate.y);
  EXPECT_EQ(second.state.mu_history, once.state.mu_history);
}

TEST(CpCgmTest, StateJsonKeepsUnlimitedBudget) {
  IpmBudget budget;
  budget.deterministic = true;
  budget.target_rel_error = 1e-1;
  const IpmResult first = CpCgm(testing::Pnu(1e-4), budget);
  ASSERT_TRUE(std::isinf(first.state.ops_budget));
  const IpmState restored = IpmStateFromJson(IpmStateToJson(first.state));
  EXPECT_TRUE(std::isinf(restored.ops_budget));
  EXPECT_EQ(restored.best_mu, first.state.best_mu);
  budget.target_rel_error = 1e-3;
  const IpmResult second = CpCgm(testing::Pnu(1e-4), budget, &restored);
  EXPECT_EQ(second.status, IpmStatus::kTargetReached);
}

TEST(CpCgmTest, CgRespectsRowCap) {
  const ClpInstance inst = testing::RandomLp(5, 3, 7);
  IpmBudget budget;
  budget.deterministic = true;
  budget.time_limit_s = 1e-4;
  const IpmResult res = CpCgm(inst, budget);
  ASSERT_FALSE(res.state.cg_iterations.empty());
  for (int k : res.state.cg_iterations) EXPECT_LE(k, inst.m());
}

TEST(CpCgmTest, SecondOrderConeUnsupported) {
  ClpInstance inst = testing::Pnu(0.0);
  inst.cone = ConeSpec::SecondOrder(3);
  EXPECT_THROW(CpCgm(inst, IpmBudget{}), UnsupportedError);
}

TEST(InteriorPointAtGapTest, TargetsAreOrdered) {
  const ClpInstance p = testing::Pnu(1e-4);
  IpmBudget budget;
  budget.deterministic = true;
  budget.time_limit_s = 1.0;
  double prev_err = std::numeric_limits<double>::infinity();
  int prev_outer = 0;
  for (double delta : {0.5, 0.1, 0.01}) {
    const IpmResult res = InteriorPointAtGap(p, delta, budget);
    ASSERT_EQ(res.status, IpmStatus::kTargetReached) << delta;
    EXPECT_LE(res.iterate.relative_error, delta);
    EXPECT_LE(res.iterate.relative_error, prev_err);
    EXPECT_GE(res.iterate.outer, prev_outer);
    prev_err = res.iterate.relative_error;
    prev_outer = res.iterate.outer;
    EXPECT_NO_THROW(HessianRescaling(
        p, {res.iterate.x, res.iterate.y, res.iterate.s}, HessianOptions{}));
  }
}

TEST(InteriorPointAtGapTest, LooseTargetTakesFewIterations) {
  IpmBudget budget;
  budget.deterministic = true;
  budget.time_limit_s = 1.0;
  const IpmResult res = InteriorPointAtGap(TwoVar(), 0.5, budget);
  EXPECT_EQ(res.status, IpmStatus::kTargetReached);
  EXPECT_LE(res.iterate.outer, 3);
}

TEST(IpmStatusTest, Names) {
  EXPECT_EQ(IpmStatusName(IpmStatus::kTargetReached), "target-reached");
  EXPECT_EQ(IpmStatusName(IpmStatus::kStalled), "stalled");
}

}  // namespace
}  // namespace rpdhg
