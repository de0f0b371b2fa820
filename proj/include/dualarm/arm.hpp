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

#include <array>
#include <cstdint>

#include "dualarm/se3.hpp"

namespace dualarm {

inline constexpr int kNumJoints = 6;
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

// Standard (distal) Denavit-Hartenberg row.
struct DHRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

// Serial 6R arm: world <- base <- DH chain <- tool.
struct ArmModel {
  Transform base;
  std::array<DHRow, kNumJoints> dh{};
  // End-effector frame expressed in the flange frame.
  Transform tool;
  JointVector q_min = JointVector::Constant(-2.0 * M_PI);
  JointVector q_max = JointVector::Constant(2.0 * M_PI);
  JointVector qd_min = JointVector::Constant(-M_PI);
  JointVector qd_max = JointVector::Constant(M_PI);

  // Throws std::invalid_argument on inverted limits or non-finite values.
  void validate() const;
};

// UR3 link parameters, base convention of the vendor controller.
std::array<DHRow, kNumJoints> ur3_dh();

Transform dh_transform(const DHRow& row, double q);

// World poses of frames 0..6 (frame i-1 carries the axis of joint i) and of
// the end effector.
struct ChainFrames {
  std::array<Transform, kNumJoints + 1> frames;
  Transform end_effector;
};
ChainFrames chain_frames(const ArmModel& arm, const JointVector& q);

Transform forward_kinematics(const ArmModel& arm, const JointVector& q);

// World-frame geometric Jacobian at the end-effector origin, rows (υ; ω).
Mat6 geometric_jacobian(const ArmModel& arm, const JointVector& q);

struct ClampResult {
  JointVector q;
  std::array<bool, kNumJoints> clamped{};
  bool any() const;
};
ClampResult clamp_joints(const ArmModel& arm, const JointVector& q);

// Axis-aligned bounds of end-effector positions, in the base frame, over
// uniform samples of the joint box. Sample k is the same for every n, so
// bounds grow monotonically with n for a fixed seed.
struct WorkspaceBounds {
  Vec3 min;
  Vec3 max;
};
WorkspaceBounds workspace_estimate(const ArmModel& arm, int n_samples,
                                   std::uint64_t seed);

}  // namespace dualarm
