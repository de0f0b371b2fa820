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
#include <stdexcept>

namespace dualarm {
namespace {

Vec6 stack(const Vec3& a, const Vec3& b) {
  Vec6 v;
  v << a, b;
  return v;
}

// ½tr(I − AᵀB) for rotations A, B.
double half_trace_gap(const Mat3& a, const Mat3& b) {
  return 0.5 * (3.0 - (a.transpose() * b).trace());
}

JointPair apply_jacobians(const TaskPair& t, const JacobianPair& j) {
  return {j.left.transpose() * t.left, j.right.transpose() * t.right};
}

}  // namespace

void Gains::validate() const {
  if (!(w_d >= 0.0) || !(w_t >= 0.0) || !(w_s >= 0.0)) {
    throw std::invalid_argument("Gains: weights must be nonnegative");
  }
  if (w_d + w_t + w_s == 0.0) {
    throw std::invalid_argument("Gains: weights must not all be zero");
  }
  if (!(feature_scale > 0.0)) {
    throw std::invalid_argument("Gains: feature_scale must be positive");
  }
}

DualPose distribute_desired(const DualPose& initial_arms,
                            const Transform& initial_object,
                            const Transform& desired_object) {
  const Transform delta = initial_object.inverse() * desired_object;
  return {initial_arms.left * delta, initial_arms.right * delta};
}

ReferenceState::ReferenceState(const DualPose& initial_arms,
                               const Transform& initial_object,
                               const FeatureSet& initial_features)
    : initial_arms_(initial_arms),
      initial_object_(initial_object),
      desired_object_(initial_object),
      desired_arms_(initial_arms),
      initial_features_(initial_features) {}

ReferenceState ReferenceState::with_desired_object(
    const Transform& desired_object) const {
  ReferenceState r = *this;
  r.desired_object_ = desired_object;
  r.desired_arms_ =
      distribute_desired(initial_arms_, initial_object_, desired_object);
  return r;
}

double value_Vd(const DualPose& state, const ReferenceState& refs) {
  const DualPose& d = refs.desired_arms();
  double v = 0.0;
  for (const auto& [x, xd] : {std::pair{&state.left, &d.left},
                              std::pair{&state.right, &d.right}}) {
    v += half_trace_gap(xd->rotation.matrix(), x->rotation.matrix()) +
         0.5 * (x->position - xd->position).squaredNorm();
  }
  return v;
}

TaskPair task_gradient_Vd(const DualPose& state, const ReferenceState& refs) {
  const DualPose& d = refs.desired_arms();
  auto factor = [](const Transform& x, const Transform& xd) {
    return stack(x.position - xd.position,
                 sk_vee(x.rotation.matrix() *
                        xd.rotation.matrix().transpose()));
  };
  return {factor(state.left, d.left), factor(state.right, d.right)};
}

JointPair grad_Vd(const DualPose& state, const ReferenceState& refs,
                  const JacobianPair& jacobians) {
  return apply_jacobians(task_gradient_Vd(state, refs), jacobians);
}

double value_Vt(const DualPose& state, const ReferenceState& refs) {
  const DualPose& b = refs.initial_arms();
  const Mat3& rbl = b.left.rotation.matrix();
  const Mat3& rbr = b.right.rotation.matrix();
  const Mat3 rtl = rbl.transpose() * state.left.rotation.matrix();
  const Mat3 rtr = rbr.transpose() * state.right.rotation.matrix();
  const Vec3 xtl = state.left.position - b.left.position;
  const Vec3 xtr = state.right.position - b.right.position;
  return half_trace_gap(rtr, rtl) +
         0.5 * (rbl.transpose() * xtl - rbr.transpose() * xtr).squaredNorm();
}

TaskPair task_gradient_Vt(const DualPose& state, const ReferenceState& refs) {
  const DualPose& b = refs.initial_arms();
  auto factor = [](const Transform& self, const Transform& self0,
                   const Transform& other, const Transform& other0) {
    const Mat3& r0 = self0.rotation.matrix();
    const Mat3& o0 = other0.rotation.matrix();
    const Vec3 xt = self.position - self0.position;
    const Vec3 xo = other.position - other0.position;
    // R_* R̃ᵀ R̄_*ᵀ regrouped as (R_* R_oᵀ)(R̄_* R̄_oᵀ)ᵀ, which is exactly
    // symmetric at the reference.
    const Mat3 now = self.rotation.matrix() * other.rotation.matrix().transpose();
    const Mat3 then = r0 * o0.transpose();
    return stack(xt - r0 * o0.transpose() * xo,
                 sk_vee(now * then.transpose()));
  };
  return {factor(state.left, b.left, state.right, b.right),
          factor(state.right, b.right, state.left, b.left)};
}

JointPair grad_Vt(const DualPose& state, const ReferenceState& refs,
                  const JacobianPair& jacobians) {
  return apply_jacobians(task_gradient_Vt(state, refs), jacobians);
}

double value_Vs(const FeatureSet& features, const ReferenceState& refs) {
  return 0.5 *
         (features.stacked() - refs.initial_features().stacked()).squaredNorm();
}

TaskPair task_gradient_Vs(const DualPose& state, const VisionRig& rig_l,
                          const VisionRig& rig_r, const FeatureSet& features,
                          const ReferenceState& refs) {
  const InteractionBlocks b =
      interaction_blocks(state, rig_l, rig_r, features);
  const Feature16 e =
      features.stacked() - refs.initial_features().stacked();
  return {b.wrt_left().transpose() * e, b.wrt_right().transpose() * e};
}

JointPair grad_Vs(const DualPose& state, const VisionRig& rig_l,
                  const VisionRig& rig_r, const FeatureSet& features,
                  const ReferenceState& refs, const JacobianPair& jacobians) {
  return apply_jacobians(
      task_gradient_Vs(state, rig_l, rig_r, features, refs), jacobians);
}

JointPair control_step(const ControllerInput& input, const ReferenceState& refs,
                       const VisionRig& rig_l, const VisionRig& rig_r,
                       const Gains& gains) {
  const TaskPair d = task_gradient_Vd(input.pose, refs);
  const TaskPair t = task_gradient_Vt(input.pose, refs);
  TaskPair sum{gains.w_d * d.left + gains.w_t * t.left,
               gains.w_d * d.right + gains.w_t * t.right};
  if (gains.w_s != 0.0) {
    const double ws =
        gains.w_s / (gains.feature_scale * gains.feature_scale);
    const TaskPair s =
        task_gradient_Vs(input.pose, rig_l, rig_r, input.features, refs);
    sum.left += ws * s.left;
    sum.right += ws * s.right;
  }
  const JointPair g = apply_jacobians(sum, input.jacobians);
  return {-g.left, -g.right};
}

ObjectiveValues value_V(const DualPose& state, const FeatureSet& features,
                        const ReferenceState& refs, const Gains& gains) {
  ObjectiveValues o;
  o.v_d = value_Vd(state, refs);
  o.v_t = value_Vt(state, refs);
  o.v_s = value_Vs(features, refs);
  o.v = gains.w_d * o.v_d + gains.w_t * o.v_t +
        gains.w_s / (gains.feature_scale * gains.feature_scale) * o.v_s;
  return o;
}

}  // namespace dualarm
