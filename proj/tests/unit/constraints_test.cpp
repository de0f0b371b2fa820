// Copyright 2026 The dualarm-ibvs Authors.
//
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

#include "dualarm/constraints.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dualarm/defaults.hpp"
#include "oracles.hpp"

namespace dualarm {
namespace {

TEST(PenaltyTest, ZeroUpToThresholdAndContinuous) {
  EXPECT_EQ(penalty(-0.05, -0.05), 0.0);
  EXPECT_EQ(penalty(-3.0, -0.05), 0.0);
  EXPECT_LT(penalty(std::nextafter(-0.05, 0.0), -0.05), 1e-12);
  EXPECT_LT(penalty_derivative(std::nextafter(-0.05, 0.0), -0.05), 1e-12);
}

TEST(PenaltyTest, HandValue) {
  // u = (−1 + 0.5)/(−0.5) = 1.
  EXPECT_NEAR(penalty(-0.5, -1.0), std::exp(1.0) - 2.0, 1e-15);
}

TEST(PenaltyTest, BlowsUpAtBoundaryAndThrowsBeyond) {
  EXPECT_GT(penalty(-1e-3, -0.05), 1e15);
  EXPECT_THROW(penalty(0.0, -0.05), ConstraintViolated);
  EXPECT_THROW(penalty_derivative(0.1, -0.05), ConstraintViolated);
}

TEST(PenaltyTest, DerivativeMatchesFiniteDifferencesAndIsPositive) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double h_bar = -0.01 - u(rng);
    const double h = h_bar * (0.05 + 0.9 * u(rng));
    const double step = 1e-7 * std::abs(h);
    const double fd =
        (penalty(h + step, h_bar) - penalty(h - step, h_bar)) / (2 * step);
    const double d = penalty_derivative(h, h_bar);
    EXPECT_GT(d, 0.0);
    EXPECT_LT(std::abs(d - fd) / std::abs(fd), 1e-6);
  }
}

TEST(PenaltyGradientTest, ChainRule) {
  ConstraintEval e;
  e.grad_l = JointVector::Constant(2.0);
  e.grad_r = JointVector::LinSpaced(-1.0, 1.0);
  PenaltyConfig cfg;
  e.h = -0.2;
  EXPECT_TRUE(penalty_gradient(e, cfg).left.isZero(0.0));
  e.h = -0.01;
  const PenaltyGradient g = penalty_gradient(e, cfg);
  const double d = penalty_derivative(-0.01, cfg.h_bar);
  EXPECT_TRUE(g.left.isApprox(d * e.grad_l));
  EXPECT_TRUE(g.right.isApprox(d * e.grad_r));
}

TEST(ScaleInputsTest, WithinLimitsIsUnchanged) {
  const JointVector lo = JointVector::Constant(-1.0), hi = -lo;
  const JointVector qd = JointVector::LinSpaced(-0.9, 0.9);
  const ScaledCommand s = scale_inputs(qd, lo, hi);
  EXPECT_EQ(s.alpha, 1.0);
  EXPECT_EQ(s.qd, qd);
}

TEST(ScaleInputsTest, SingleSaturatedJoint) {
  JointVector lo = JointVector::Constant(-1.0), hi = -lo;
  hi[0] = 0.5;
  JointVector qd = JointVector::Zero();
  qd[0] = 1.0;
  const ScaledCommand s = scale_inputs(qd, lo, hi);
  EXPECT_EQ(s.alpha, 2.0);
  EXPECT_EQ(s.qd[0], 0.5);
}

TEST(ScaleInputsTest, RandomCommandsRespectLimitsAndDirection) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int k = 0; k < 10000; ++k) {
    JointVector lo, hi;
    for (int i = 0; i < kNumJoints; ++i) {
      lo[i] = -u(rng);
      hi[i] = u(rng);
    }
    const JointVector qd = testing::random_joints(rng, 10.0);
    const ScaledCommand s = scale_inputs(qd, lo, hi);
    ASSERT_GE(s.alpha, 1.0);
    ASSERT_TRUE((s.qd.array() <= hi.array()).all());
    ASSERT_TRUE((s.qd.array() >= lo.array()).all());
    ASSERT_EQ(s.qd, qd / s.alpha);
  }
}

class JointLimitTest : public ::testing::Test {
 protected:
  Scenario sc_ = default_scenario(1);
};

TEST_F(JointLimitTest, CentredJointsAreDeepInside) {
  const JointVector mid = JointVector::Zero();
  const ConstraintEval e =
      joint_limit_constraint(mid, mid, sc_.arm_l, sc_.arm_r, 0.02, 100.0);
  EXPECT_LT(e.h, -6.0);
  EXPECT_LT(e.grad_l.norm() + e.grad_r.norm(), 1e-12);
}

TEST_F(JointLimitTest, BoundaryGivesZero) {
  JointVector q = JointVector::Zero();
  q[4] = sc_.arm_l.q_max[4] - 0.02;
  const ConstraintEval e = joint_limit_constraint(
      q, JointVector::Zero(), sc_.arm_l, sc_.arm_r, 0.02, 100.0);
  EXPECT_NEAR(e.h, 0.0, 1e-12);
  EXPECT_NEAR(e.grad_l[4], 1.0, 1e-12);
}

TEST_F(JointLimitTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(43);
  ArmModel al = sc_.arm_l, ar = sc_.arm_r;
  al.q_min = ar.q_min = JointVector::Constant(-0.1);
  al.q_max = ar.q_max = JointVector::Constant(0.1);
  for (int k = 0; k < 100; ++k) {
    const JointVector ql = testing::random_joints(rng, 0.1);
    const JointVector qr = testing::random_joints(rng, 0.1);
    const ConstraintEval e =
        joint_limit_constraint(ql, qr, al, ar, 0.02, 100.0);
    Eigen::VectorXd g(12);
    g << e.grad_l, e.grad_r;
    const auto h = [&](const JointVector& a, const JointVector& b) {
      return joint_limit_constraint(a, b, al, ar, 0.02, 100.0).h;
    };
    EXPECT_LT(testing::relative_error(
                  g, testing::central_difference(h, ql, qr, 1e-6)),
              1e-5);
  }
}

TEST(PenaltyConfigTest, Validation) {
  PenaltyConfig c;
  EXPECT_NO_THROW(c.validate());
  c.h_bar = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace dualarm
