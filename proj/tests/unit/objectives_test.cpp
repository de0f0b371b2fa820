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

#include "dualarm/objectives.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dualarm/defaults.hpp"
#include "oracles.hpp"

namespace dualarm {
namespace {

using testing::central_difference;
using testing::random_joints;
using testing::random_transform;
using testing::random_vec3;
using testing::relative_error;
using testing::to_affine;

class ObjectivesTest : public ::testing::Test {
 protected:
  ObjectivesTest() : sc_(default_scenario(1)), rng_(31) {
    const DualPose p0 = pose(sc_.q0_l, sc_.q0_r);
    base_ = std::make_unique<ReferenceState>(
        p0, p0.left * sc_.object_in_left,
        feature_set(p0, sc_.rig_l, sc_.rig_r));
  }

  DualPose pose(const JointVector& ql, const JointVector& qr) const {
    return {forward_kinematics(sc_.arm_l, ql),
            forward_kinematics(sc_.arm_r, qr)};
  }

  JacobianPair jacobians(const JointVector& ql, const JointVector& qr) const {
    return {geometric_jacobian(sc_.arm_l, ql),
            geometric_jacobian(sc_.arm_r, qr)};
  }

  ReferenceState random_refs() {
    const Transform t{Rotation::Exp(random_vec3(rng_, 0.2)),
                      base_->initial_object().position + random_vec3(rng_, 0.1)};
    return base_->with_desired_object(t);
  }

  JointVector near_q0() { return sc_.q0_l + random_joints(rng_, 0.15); }

  static Eigen::VectorXd stack(const JointPair& g) {
    Eigen::VectorXd v(12);
    v << g.left, g.right;
    return v;
  }

  Scenario sc_;
  std::mt19937_64 rng_;
  std::unique_ptr<ReferenceState> base_;
};

TEST_F(ObjectivesTest, DistributeHoldsInPlace) {
  const DualPose d = distribute_desired(base_->initial_arms(),
                                        base_->initial_object(),
                                        base_->initial_object());
  EXPECT_LT((d.left.matrix() - base_->initial_arms().left.matrix()).norm(),
            1e-12);
  EXPECT_LT((d.right.matrix() - base_->initial_arms().right.matrix()).norm(),
            1e-12);
}

TEST_F(ObjectivesTest, DistributeMatchesHomogeneousComposition) {
  for (int k = 0; k < 50; ++k) {
    const DualPose arms{random_transform(rng_), random_transform(rng_)};
    const Transform obj = random_transform(rng_);
    const Transform target = random_transform(rng_);
    const DualPose d = distribute_desired(arms, obj, target);
    const Mat4 want_l = (to_affine(arms.left) * to_affine(obj).inverse() *
                         to_affine(target)).matrix();
    EXPECT_LT((d.left.matrix() - want_l).norm(), 1e-12);
    // A pure object translation reaches each arm through R̄·R̄_oᵀ.
    const Vec3 delta = random_vec3(rng_);
    const DualPose e = distribute_desired(
        arms, obj, Transform{obj.rotation, obj.position + delta});
    const Vec3 moved = arms.right.rotation.matrix() *
                       obj.rotation.matrix().transpose() * delta;
    EXPECT_LT((e.right.position - arms.right.position - moved).norm(), 1e-12);
  }
}

TEST_F(ObjectivesTest, PathWaypointsGiveDistinctTargets) {
  for (int path = 1; path <= 3; ++path) {
    const Scenario sc = default_scenario(path);
    ASSERT_EQ(sc.waypoints.size(), 3u);
    EXPECT_EQ(sc.waypoints[0].name, "B");
    EXPECT_EQ(sc.waypoints[2].position, Vec3::Zero());
    const ReferenceState b = base_->with_desired_object(
        waypoint_pose(sc.waypoints[0], base_->initial_object()));
    EXPECT_GT((b.desired_arms().left.position -
               base_->initial_arms().left.position).norm(), 0.01);
  }
}

TEST_F(ObjectivesTest, VdZeroAtTargetAndTraceIdentity) {
  const ReferenceState r = random_refs();
  EXPECT_NEAR(value_Vd(r.desired_arms(), r), 0.0, 1e-14);
  for (double th : {0.1, 1.0, 2.5}) {
    DualPose p = r.desired_arms();
    p.right.rotation = Rotation::AxisAngle(random_vec3(rng_), th) *
                       p.right.rotation;
    EXPECT_NEAR(value_Vd(p, r), 1.0 - std::cos(th), 1e-12);
  }
}

TEST_F(ObjectivesTest, VdFormulaOracle) {
  for (int k = 0; k < 50; ++k) {
    const ReferenceState r = random_refs();
    const DualPose p{random_transform(rng_), random_transform(rng_)};
    double want = 0.0;
    for (auto [x, d] : {std::pair{p.left, r.desired_arms().left},
                        std::pair{p.right, r.desired_arms().right}}) {
      want += 0.5 * (Mat3::Identity() -
                     d.rotation.matrix().transpose() * x.rotation.matrix())
                        .trace() +
              0.5 * (x.position - d.position).squaredNorm();
    }
    EXPECT_NEAR(value_Vd(p, r), want, 1e-12);
  }
}

TEST_F(ObjectivesTest, GradVdMatchesFiniteDifferences) {
  for (int k = 0; k < 30; ++k) {
    const ReferenceState r = random_refs();
    const JointVector ql = near_q0(), qr = near_q0();
    const JointPair g = grad_Vd(pose(ql, qr), r, jacobians(ql, qr));
    const auto f = [&](const JointVector& a, const JointVector& b) {
      return value_Vd(pose(a, b), r);
    };
    EXPECT_LT(relative_error(stack(g), central_difference(f, ql, qr, 1e-6)),
              1e-5);
  }
  EXPECT_TRUE(stack(grad_Vd(base_->desired_arms(), *base_,
                            jacobians(sc_.q0_l, sc_.q0_r)))
                  .isZero(1e-14));
}

TEST_F(ObjectivesTest, RotationOnlyErrorHasNoTranslationFactor) {
  const ReferenceState r = random_refs();
  DualPose p = r.desired_arms();
  p.left.rotation = Rotation::Exp(random_vec3(rng_, 0.5)) * p.left.rotation;
  const TaskPair t = task_gradient_Vd(p, r);
  EXPECT_TRUE(t.left.head<3>().isZero(0.0));
  EXPECT_GT(t.left.tail<3>().norm(), 0.0);
}

TEST_F(ObjectivesTest, VtZeroUnderCommonDisplacement) {
  EXPECT_NEAR(value_Vt(base_->initial_arms(), *base_), 0.0, 1e-14);
  for (int k = 0; k < 20; ++k) {
    // Same world rigid transform applied to both initial poses.
    const Transform g = random_transform(rng_, 0.2);
    const DualPose p{g * base_->initial_arms().left,
                     g * base_->initial_arms().right};
    EXPECT_NEAR(value_Vt(p, *base_), 0.0, 1e-12);
    const TaskPair t = task_gradient_Vt(p, *base_);
    EXPECT_LT(t.left.norm() + t.right.norm(), 1e-12);
  }
}

TEST_F(ObjectivesTest, VtFormulaOracle) {
  for (int k = 0; k < 50; ++k) {
    const DualPose p{random_transform(rng_), random_transform(rng_)};
    const DualPose& b = base_->initial_arms();
    const Mat3 rl = b.left.rotation.matrix().transpose() *
                    p.left.rotation.matrix();
    const Mat3 rr = b.right.rotation.matrix().transpose() *
                    p.right.rotation.matrix();
    const Vec3 dl = b.left.rotation.matrix().transpose() *
                    (p.left.position - b.left.position);
    const Vec3 dr = b.right.rotation.matrix().transpose() *
                    (p.right.position - b.right.position);
    const double want = 0.5 * (Mat3::Identity() - rl * rr.transpose()).trace() +
                        0.5 * (dl - dr).squaredNorm();
    EXPECT_NEAR(value_Vt(p, *base_), want, 1e-12);
    EXPECT_GE(value_Vt(p, *base_), 0.0);
  }
}

TEST_F(ObjectivesTest, GradVtMatchesFiniteDifferences) {
  for (int k = 0; k < 30; ++k) {
    const JointVector ql = near_q0(), qr = near_q0();
    const JointPair g = grad_Vt(pose(ql, qr), *base_, jacobians(ql, qr));
    const auto f = [&](const JointVector& a, const JointVector& b) {
      return value_Vt(pose(a, b), *base_);
    };
    EXPECT_LT(relative_error(stack(g), central_difference(f, ql, qr, 1e-6)),
              1e-5);
  }
}

TEST_F(ObjectivesTest, GradVtSwapsWithArms) {
  const DualPose p{random_transform(rng_), random_transform(rng_)};
  const DualPose& b = base_->initial_arms();
  const ReferenceState swapped({b.right, b.left}, base_->initial_object(),
                               base_->initial_features());
  const TaskPair a = task_gradient_Vt(p, *base_);
  const TaskPair s = task_gradient_Vt({p.right, p.left}, swapped);
  EXPECT_LT((a.left - s.right).norm(), 1e-12);
  EXPECT_LT((a.right - s.left).norm(), 1e-12);
}

TEST_F(ObjectivesTest, VsValues) {
  FeatureSet f = base_->initial_features();
  EXPECT_EQ(value_Vs(f, *base_), 0.0);
  f.s_r[1] += Vec2(3.0, 4.0);
  EXPECT_NEAR(value_Vs(f, *base_), 12.5, 1e-12);
  for (int k = 0; k < 20; ++k) {
    FeatureSet g = base_->initial_features();
    double want = 0.0;
    for (int i = 0; i < 4; ++i) {
      const Vec2 a = Vec2::Random() * 10, b = Vec2::Random() * 10;
      g.s_l[i] += a;
      g.s_r[i] += b;
      want += 0.5 * (a.squaredNorm() + b.squaredNorm());
    }
    EXPECT_NEAR(value_Vs(g, *base_), want, 1e-9);
  }
}

TEST_F(ObjectivesTest, GradVsMatchesFiniteDifferences) {
  for (int k = 0; k < 30; ++k) {
    const JointVector ql = near_q0(), qr = near_q0();
    const DualPose p = pose(ql, qr);
    const FeatureSet f = feature_set(p, sc_.rig_l, sc_.rig_r);
    const JointPair g =
        grad_Vs(p, sc_.rig_l, sc_.rig_r, f, *base_, jacobians(ql, qr));
    const auto v = [&](const JointVector& a, const JointVector& b) {
      return value_Vs(feature_set(pose(a, b), sc_.rig_l, sc_.rig_r), *base_);
    };
    EXPECT_LT(relative_error(stack(g), central_difference(v, ql, qr, 1e-6)),
              1e-4);
  }
}

TEST_F(ObjectivesTest, GradVsNonzeroUnderCommonDisplacementOnlyIfFeaturesMove) {
  // A common rigid displacement keeps the relative geometry, hence V_s = 0
  // and a zero gradient; a relative one does not.
  const Transform g = random_transform(rng_, 0.1);
  const DualPose p{g * base_->initial_arms().left,
                   g * base_->initial_arms().right};
  const FeatureSet f = feature_set(p, sc_.rig_l, sc_.rig_r);
  EXPECT_NEAR(value_Vs(f, *base_), 0.0, 1e-16);
  const TaskPair t = task_gradient_Vs(p, sc_.rig_l, sc_.rig_r, f, *base_);
  EXPECT_LT(t.left.norm(), 1e-6);
  DualPose q = p;
  q.left.position += Vec3(0.01, 0.0, 0.0);
  const FeatureSet fq = feature_set(q, sc_.rig_l, sc_.rig_r);
  EXPECT_GT(task_gradient_Vs(q, sc_.rig_l, sc_.rig_r, fq, *base_).left.norm(),
            1.0);
}

TEST_F(ObjectivesTest, ControlIsZeroAtGlobalMinimum) {
  const ControllerInput in{base_->initial_arms(),
                           jacobians(sc_.q0_l, sc_.q0_r),
                           base_->initial_features()};
  const JointPair qd = control_step(in, *base_, sc_.rig_l, sc_.rig_r, Gains{});
  EXPECT_TRUE(qd.left.isZero(1e-30));
  EXPECT_TRUE(qd.right.isZero(1e-30));
}

TEST_F(ObjectivesTest, PoseOnlyControlIgnoresCameraData) {
  const ReferenceState r = random_refs();
  const JointVector ql = near_q0(), qr = near_q0();
  ControllerInput in{pose(ql, qr), jacobians(ql, qr),
                     feature_set(pose(ql, qr), sc_.rig_l, sc_.rig_r)};
  Gains g;
  g.w_s = 0.0;
  const JointPair a = control_step(in, r, sc_.rig_l, sc_.rig_r, g);
  in.features = FeatureSet{};  // Zero depths would poison any use.
  VisionRig junk;
  const JointPair b = control_step(in, r, junk, junk, g);
  EXPECT_EQ(a.left, b.left);
  EXPECT_EQ(a.right, b.right);
}

TEST_F(ObjectivesTest, ControlIsWeightedSumAndDescends) {
  for (int k = 0; k < 30; ++k) {
    const ReferenceState r = random_refs();
    const JointVector ql = near_q0(), qr = near_q0();
    const DualPose p = pose(ql, qr);
    const JacobianPair j = jacobians(ql, qr);
    const FeatureSet f = feature_set(p, sc_.rig_l, sc_.rig_r);
    const Gains g{1.0, 0.5, 0.5, 600.0};
    const Eigen::VectorXd sum =
        g.w_d * stack(grad_Vd(p, r, j)) + g.w_t * stack(grad_Vt(p, r, j)) +
        g.w_s / (600.0 * 600.0) *
            stack(grad_Vs(p, sc_.rig_l, sc_.rig_r, f, r, j));
    const Eigen::VectorXd qd =
        stack(control_step({p, j, f}, r, sc_.rig_l, sc_.rig_r, g));
    EXPECT_LT((qd + sum).norm(), 1e-12 * sum.norm());
    EXPECT_NEAR(sum.dot(qd), -qd.squaredNorm(), 1e-10 * qd.squaredNorm());
  }
}

TEST_F(ObjectivesTest, ValueVComponents) {
  const ReferenceState r = random_refs();
  const JointVector ql = near_q0(), qr = near_q0();
  const DualPose p = pose(ql, qr);
  const FeatureSet f = feature_set(p, sc_.rig_l, sc_.rig_r);
  const ObjectiveValues v = value_V(p, f, r, Gains{1.0, 0.0, 0.0, 600.0});
  EXPECT_EQ(v.v, v.v_d);
  const ObjectiveValues w = value_V(p, f, r, Gains{1.0, 0.5, 0.5, 600.0});
  EXPECT_NEAR(w.v, w.v_d + 0.5 * w.v_t + 0.5 / 360000.0 * w.v_s, 1e-14);
  const ObjectiveValues z =
      value_V(r.desired_arms(), r.initial_features(), *base_, Gains{});
  EXPECT_GE(z.v, -1e-14);
  EXPECT_NEAR(value_V(base_->initial_arms(), base_->initial_features(), *base_,
                      Gains{})
                  .v,
              0.0, 1e-14);
}

TEST(GainsTest, Validation) {
  EXPECT_NO_THROW((Gains{1.0, 0.0, 0.0, 600.0}.validate()));
  EXPECT_THROW((Gains{0.0, 0.0, 0.0, 600.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Gains{1.0, -0.1, 0.0, 600.0}.validate()),
               std::invalid_argument);
}

}  // namespace
}  // namespace dualarm
