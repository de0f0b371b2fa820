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

#pragma once

#include "dualarm/arm.hpp"
#include "dualarm/camera.hpp"

namespace dualarm {

struct Gains {
  double w_d = 1.0;
  double w_t = 0.5;
  double w_s = 0.5;
  // Pixel scale σ: the feature term enters V as (w_s/σ²)V_s so that the three
  // weights act on comparable, dimensionless quantities.
  double feature_scale = 600.0;

  void validate() const;
};

struct JointPair {
  JointVector left = JointVector::Zero();
  JointVector right = JointVector::Zero();
};

struct JacobianPair {
  Mat6 left = Mat6::Zero();
  Mat6 right = Mat6::Zero();
};

// Task-space factors (before multiplication by Jᵀ), stacked (υ; ω).
struct TaskPair {
  Vec6 left = Vec6::Zero();
  Vec6 right = Vec6::Zero();
};

DualPose distribute_desired(const DualPose& initial_arms,
                            const Transform& initial_object,
                            const Transform& desired_object);

// Targets captured once at grasp time. Only the desired object pose changes
// over a run, through with_desired_object.
class ReferenceState {
 public:
  ReferenceState(const DualPose& initial_arms, const Transform& initial_object,
                 const FeatureSet& initial_features);

  ReferenceState with_desired_object(const Transform& desired_object) const;

  const DualPose& initial_arms() const { return initial_arms_; }
  const Transform& initial_object() const { return initial_object_; }
  const Transform& desired_object() const { return desired_object_; }
  const DualPose& desired_arms() const { return desired_arms_; }
  const FeatureSet& initial_features() const { return initial_features_; }

 private:
  DualPose initial_arms_;
  Transform initial_object_;
  Transform desired_object_;
  DualPose desired_arms_;
  FeatureSet initial_features_;
};

double value_Vd(const DualPose& state, const ReferenceState& refs);
TaskPair task_gradient_Vd(const DualPose& state, const ReferenceState& refs);
JointPair grad_Vd(const DualPose& state, const ReferenceState& refs,
                  const JacobianPair& jacobians);

double value_Vt(const DualPose& state, const ReferenceState& refs);
TaskPair task_gradient_Vt(const DualPose& state, const ReferenceState& refs);
JointPair grad_Vt(const DualPose& state, const ReferenceState& refs,
                  const JacobianPair& jacobians);

double value_Vs(const FeatureSet& features, const ReferenceState& refs);
// Blocks are built from `state` and the depths in `features`.
TaskPair task_gradient_Vs(const DualPose& state, const VisionRig& rig_l,
                          const VisionRig& rig_r, const FeatureSet& features,
                          const ReferenceState& refs);
JointPair grad_Vs(const DualPose& state, const VisionRig& rig_l,
                  const VisionRig& rig_r, const FeatureSet& features,
                  const ReferenceState& refs, const JacobianPair& jacobians);

// What the controller knows at one instant.
struct ControllerInput {
  DualPose pose;
  JacobianPair jacobians;
  FeatureSet features;
};

// q̇ = −(w_d ∇V_d + w_t ∇V_t + (w_s/σ²) ∇V_s). With w_s = 0 the feature data
// is not touched.
JointPair control_step(const ControllerInput& input, const ReferenceState& refs,
                       const VisionRig& rig_l, const VisionRig& rig_r,
                       const Gains& gains);

struct ObjectiveValues {
  double v = 0.0;
  double v_d = 0.0;
  double v_t = 0.0;
  double v_s = 0.0;
};
ObjectiveValues value_V(const DualPose& state, const FeatureSet& features,
                        const ReferenceState& refs, const Gains& gains);

}  // namespace dualarm
