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

#include "dualarm/arm.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dualarm/defaults.hpp"
#include "oracles.hpp"

namespace dualarm {
namespace {

using testing::PoeArm;
using testing::random_joints;

ArmModel ur3_at(const Vec3& p) {
  return default_arm(Transform::Translation(p));
}

TEST(ForwardKinematicsTest, DegenerateChainStacksOffsets) {
  ArmModel arm;
  for (int i = 0; i < kNumJoints; ++i) arm.dh[i] = {0.0, 0.0, 0.1 * (i + 1), 0.0};
  const Transform t = forward_kinematics(arm, JointVector::Zero());
  EXPECT_TRUE(t.position.isApprox(Vec3(0, 0, 2.1)));
  EXPECT_TRUE(t.rotation.matrix().isApprox(Mat3::Identity()));
}

TEST(ForwardKinematicsTest, BasePositionsAppearAtTheBaseFrame) {
  // Frame 0 is the base; with a zero-length chain the end effector sits on it.
  for (const Vec3& p : {Vec3(0, -0.55, 0), Vec3(0, 0.55, 0)}) {
    ArmModel arm = ur3_at(p);
    for (DHRow& r : arm.dh) r = {};
    EXPECT_EQ(forward_kinematics(arm, JointVector::Zero()).position, p);
    EXPECT_EQ(chain_frames(ur3_at(p), JointVector::Zero()).frames[0].position,
              p);
  }
}

TEST(ForwardKinematicsTest, MatchesProductOfExponentials) {
  std::mt19937_64 rng(11);
  const Scenario sc = default_scenario(1);
  for (const ArmModel& arm : {sc.arm_l, sc.arm_r, ur3_at(Vec3(0.1, 0.2, 0.3))}) {
    const PoeArm poe(arm);
    for (int k = 0; k < 200; ++k) {
      const JointVector q = random_joints(rng, M_PI);
      const Transform t = forward_kinematics(arm, q);
      EXPECT_LT((t.matrix() - poe.fk(q).matrix()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(JacobianTest, PlanarLever) {
  ArmModel arm;
  arm.dh[0] = {1.0, 0.0, 0.0, 0.0};
  const Mat6 j = geometric_jacobian(arm, JointVector::Zero());
  Vec6 want;
  want << 0, 1, 0, 0, 0, 1;
  EXPECT_TRUE(j.col(0).isApprox(want));
}

TEST(JacobianTest, ZeroRateGivesZeroTwist) {
  const Mat6 j = geometric_jacobian(ur3_at(Vec3::Zero()), default_initial_joints());
  EXPECT_TRUE((j * JointVector::Zero()).isZero(0.0));
}

TEST(JacobianTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  const Scenario sc = default_scenario(1);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const ArmModel& arm = k % 2 ? sc.arm_l : sc.arm_r;
    const JointVector q = random_joints(rng, M_PI);
    const JointVector dq = random_joints(rng, 1.0);
    const PoeArm poe(arm);
    const testing::Affine a = poe.fk(q + h * dq), b = poe.fk(q - h * dq);
    Vec6 fd;
    fd.head<3>() = (a.translation() - b.translation()) / (2 * h);
    const Mat3 rdot = (a.linear() - b.linear()) / (2 * h);
    fd.tail<3>() = sk_vee(rdot * poe.fk(q).linear().transpose());
    const Vec6 got = geometric_jacobian(arm, q) * dq;
    EXPECT_LT((got - fd).norm() / fd.norm(), 1e-5);
  }
}

TEST(ClampTest, InsideIsUnchanged) {
  const ArmModel arm = ur3_at(Vec3::Zero());
  const JointVector q = default_initial_joints();
  const ClampResult r = clamp_joints(arm, q);
  EXPECT_EQ(r.q, q);
  EXPECT_FALSE(r.any());
}

TEST(ClampTest, SaturatesAndFlags) {
  ArmModel arm = ur3_at(Vec3::Zero());
  arm.q_max[2] = 1.0;
  JointVector q = JointVector::Zero();
  q[2] = 1.1;
  const ClampResult r = clamp_joints(arm, q);
  EXPECT_EQ(r.q[2], 1.0);
  EXPECT_TRUE(r.clamped[2]);
  EXPECT_FALSE(r.clamped[1]);
}

TEST(ClampTest, OutputAlwaysWithinLimits) {
  std::mt19937_64 rng(13);
  ArmModel arm = ur3_at(Vec3::Zero());
  arm.q_min = -random_joints(rng, 1.0).cwiseAbs();
  arm.q_max = random_joints(rng, 1.0).cwiseAbs();
  for (int k = 0; k < 1000; ++k) {
    const ClampResult r = clamp_joints(arm, random_joints(rng, 3.0));
    EXPECT_TRUE((r.q.array() >= arm.q_min.array()).all());
    EXPECT_TRUE((r.q.array() <= arm.q_max.array()).all());
  }
}

TEST(ArmModelTest, ValidateRejectsInvertedLimits) {
  ArmModel arm = ur3_at(Vec3::Zero());
  arm.q_min[0] = 1.0;
  arm.q_max[0] = 0.0;
  EXPECT_THROW(arm.validate(), std::invalid_argument);
  arm = ur3_at(Vec3::Zero());
  arm.qd_min[3] = 0.1;
  EXPECT_THROW(arm.validate(), std::invalid_argument);
}

TEST(WorkspaceTest, SingleSampleIsAPoint) {
  const ArmModel arm = ur3_at(Vec3(5, 5, 5));
  const WorkspaceBounds b = workspace_estimate(arm, 1, 42);
  EXPECT_EQ(b.min, b.max);
  // Reported in the base frame.
  EXPECT_LT(b.min.norm(), 1.0);
}

TEST(WorkspaceTest, DeterministicAndMonotoneInSamples) {
  const ArmModel arm = ur3_at(Vec3::Zero());
  const WorkspaceBounds a = workspace_estimate(arm, 2000, 7);
  const WorkspaceBounds b = workspace_estimate(arm, 2000, 7);
  const WorkspaceBounds c = workspace_estimate(arm, 4000, 7);
  EXPECT_EQ(a.min, b.min);
  EXPECT_EQ(a.max, b.max);
  EXPECT_TRUE((c.min.array() <= a.min.array()).all());
  EXPECT_TRUE((c.max.array() >= a.max.array()).all());
}

TEST(WorkspaceTest, RejectsZeroSamples) {
  EXPECT_THROW(workspace_estimate(ur3_at(Vec3::Zero()), 0, 1),
               std::invalid_argument);
}

}  // namespace
}  // namespace dualarm
