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


#include "rpdhg/dualgap.h"

#include <cmath>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "rpdhg/errors.h"
#include "rpdhg/pdhg.h"
#include "test_util.h"

namespace rpdhg {
namespace {

Vec V(std::initializer_list<double> v) {
  Vec out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ClpInstance Scalar(double a, double b, double c) {
  Eigen::MatrixXd am(1, 1);
  am << a;
  return MakeInstance("scalar", SparseMatrix::FromDense(am), V({b}), V({c}),
                      ConeSpec::NonNeg(1));
}

GapQuery Query(const Vec& x, const Vec& y, double r, double tau, double sigma,
               GapNorm norm = GapNorm::kN) {
  GapQuery q;
  q.x = x;
  q.y = y;
  q.r = r;
  q.tau = tau;
  q.sigma = sigma;
  q.norm = norm;
  return q;
}

// Supremum of h^T d / r over {||d||_N <= r, x + dx >= 0} for a scalar
// instance, by sampling the ellipse boundary and the x-hat = 0 chord.
double SampledRhoN(const ClpInstance& inst, double x, double y, double r,
                   double tau, double sigma) {
  const double a = inst.a.ToDense()(0, 0);
  const double h1 = a * y - inst.c[0];
  const double h2 = inst.b[0] - a * x;
  double best = 0.0;
  const int samples = 400000;
  for (int k = 0; k < samples; ++k) {
    const double th = 2 * M_PI * k / samples;
    const double dx = r * std::sqrt(tau) * std::cos(th);
    const double dy = r * std::sqrt(sigma) * std::sin(th);
    if (x + dx < 0) continue;
    best = std::max(best, (h1 * dx + h2 * dy) / r);
  }
  if (x * x / tau <= r * r) {
    const double half = std::sqrt(sigma * (r * r - x * x / tau));
    for (int k = 0; k <= 2000; ++k) {
      const double dy = -half + 2 * half * k / 2000;
      best = std::max(best, (-h1 * x + h2 * dy) / r);
    }
  }
  return best;
}

TEST(RhoNTest, ScalarHandSolve) {
  const ClpInstance inst = Scalar(1, 1, 0);
  const GapCertificate cert =
      RhoN(inst, Query(V({0}), V({0}), 1.0, 0.5, 0.5));
  EXPECT_NEAR(cert.rho, std::sqrt(2.0) / 2.0, 1e-9);
  EXPECT_NEAR(cert.t_star, 2 * std::sqrt(2.0), 1e-8);
  EXPECT_FALSE(cert.capped);
  EXPECT_NEAR(SampledRhoN(inst, 0, 0, 1, 0.5, 0.5), std::sqrt(2.0) / 2.0,
              1e-9);
}

TEST(RhoNTest, ZeroAtSaddlePoints) {
  for (const ClpInstance& inst : testing::RandomSuite(5, 101)) {
    const testing::BasisOptimum opt = testing::BruteForceLp(inst);
    ASSERT_TRUE(opt.found);
    for (double r : {1e-3, 1.0, 100.0}) {
      EXPECT_NEAR(RhoN(inst, Query(opt.x, opt.y, r, 0.3, 0.7)).rho, 0.0,
                  1e-9);
    }
  }
}

TEST(RhoNTest, PositiveAwayFromOptimum) {
  const ClpInstance p = testing::Pnu(1e-4);
  const testing::BasisOptimum opt = testing::BruteForceLp(p);
  EXPECT_GT(RhoN(p, Query(V({0, 0, 1}), opt.y, 0.5, 1.0, 0.01)).rho, 0.0);
  EXPECT_GT(RhoN(p, Query(opt.x, opt.y + V({0.1}), 0.5, 1.0, 0.01)).rho, 0.0);
}

TEST(RhoNTest, AgreesWithSampledSupremum) {
  testing::Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const ClpInstance inst =
        Scalar(rng.Uniform(-2, 2), rng.Uniform(-2, 2), rng.Uniform(-2, 2));
    const double x = rng.Uniform() < 0.3 ? 0.0 : rng.Uniform(0, 2);
    const double y = rng.Uniform(-2, 2);
    const double r = rng.Uniform(0.05, 3);
    const double tau = rng.Uniform(0.1, 2), sigma = rng.Uniform(0.1, 2);
    const double got = RhoN(inst, Query(V({x}), V({y}), r, tau, sigma)).rho;
    const double want = SampledRhoN(inst, x, y, r, tau, sigma);
    EXPECT_NEAR(got, want, 1e-4 * std::max(1.0, want)) << "trial " << trial;
  }
}

TEST(RhoNTest, NonIncreasingInRadius) {
  const ClpInstance inst = testing::RandomLp(5, 3, 6);
  testing::Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = Project(inst.cone, rng.NormalVec(6));
    const Vec y = rng.NormalVec(3);
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 1e-3; r < 1e3; r *= 2) {
      const double rho = RhoN(inst, Query(x, y, r, 0.5, 0.5)).rho;
      EXPECT_LE(rho, prev * (1 + 1e-8) + 1e-12);
      prev = rho;
    }
  }
}

TEST(RhoNTest, RejectsNonPositiveRadius) {
  const ClpInstance inst = Scalar(1, 1, 0);
  EXPECT_THROW(RhoN(inst, Query(V({0}), V({0}), 0.0, 1, 1)), InputError);
}

TEST(RhoMTest, ZeroAtSaddlePoint) {
  const ClpInstance inst = testing::RandomSuite(1, 102)[0];
  const testing::BasisOptimum opt = testing::BruteForceLp(inst);
  const StepSizes s = PracticalStepSizes(EstimateSpectra(inst.a).lambda_max, 0.9);
  EXPECT_NEAR(
      RhoM(inst, Query(opt.x, opt.y, 1.0, s.tau, s.sigma, GapNorm::kM)).rho,
      0.0, 1e-8);
}

TEST(RhoMTest, EqualsRhoNWhenAIsZero) {
  const ClpInstance inst = MakeInstance(
      "zero", SparseMatrix::FromDense(Eigen::MatrixXd::Zero(1, 2)), V({0}),
      V({1, -1}), ConeSpec::NonNeg(2));
  const GapQuery qn = Query(V({0.5, 0.2}), V({0.3}), 0.7, 0.4, 0.9);
  GapQuery qm = qn;
  qm.norm = GapNorm::kM;
  EXPECT_NEAR(RhoM(inst, qm).rho, RhoN(inst, qn).rho, 1e-7);
}

TEST(RhoMTest, SandwichedByRhoN) {
  testing::Rng rng(19);
  for (const ClpInstance& inst : testing::RandomSuite(6, 110)) {
    const double lmax = EstimateSpectra(inst.a).lambda_max;
    const StepSizes s = PracticalStepSizes(lmax, 0.9);
    const double upper = 1.0 / std::sqrt(1.0 - std::sqrt(s.tau * s.sigma) * lmax);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x = Project(inst.cone, rng.NormalVec(inst.n()));
      const Vec y = rng.NormalVec(inst.m());
      const double r = rng.Uniform(0.1, 2.0);
      const double rn = RhoN(inst, Query(x, y, r, s.tau, s.sigma)).rho;
      const double rm =
          RhoM(inst, Query(x, y, r, s.tau, s.sigma, GapNorm::kM)).rho;
      EXPECT_GE(rm, rn / std::sqrt(2.0) - 1e-7 * std::max(1.0, rn));
      EXPECT_LE(rm, upper * rn + 1e-7 * std::max(1.0, rn));
    }
  }
}

TEST(RhoMTest, SingularMetricIsUnsupported) {
  const ClpInstance p = testing::Pnu(0.0);
  EXPECT_THROW(RhoM(p, Query(V({0, 1, 0}), V({0}), 1.0, 1.0, 1.0 / 102.0,
                             GapNorm::kM)),
               UnsupportedError);
}

TEST(RestartRhoTest, ZeroRadiusIsFinite) {
  const ClpInstance p = testing::Pnu(0.0);
  const Vec x = V({0, 0.5, 0.5}), y = V({0.2});
  const double rho = RhoForRestart(p, x, y, x, y, 1.0, 1.0 / 102.0);
  EXPECT_TRUE(std::isfinite(rho));
  EXPECT_GE(rho, 0.0);
  const Vec ax = V({0, 1, 0});
  const double r = NNorm(x - ax, Vec::Zero(1), 1.0, 1.0 / 102.0);
  EXPECT_NEAR(RhoForRestart(p, x, y, ax, y, 1.0, 1.0 / 102.0),
              RhoN(p, Query(x, y, r, 1.0, 1.0 / 102.0)).rho, 1e-12);
}

}  // namespace
}  // namespace rpdhg
