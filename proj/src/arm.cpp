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
#include <stdexcept>

namespace dualarm {

void ArmModel::validate() const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(q_min[i] < q_max[i])) {
      throw std::invalid_argument("ArmModel: q_min must be below q_max");
    }
    if (!(qd_min[i] < 0.0 && qd_max[i] > 0.0)) {
      throw std::invalid_argument(
          "ArmModel: velocity limits must bracket zero");
    }
    const DHRow& r = dh[i];
    if (!std::isfinite(r.a) || !std::isfinite(r.alpha) ||
        !std::isfinite(r.d) || !std::isfinite(r.theta_offset)) {
      throw std::invalid_argument("ArmModel: non-finite DH parameter");
    }
  }
  if (!base.position.allFinite() || !tool.position.allFinite()) {
    throw std::invalid_argument("ArmModel: non-finite transform");
  }
}

std::array<DHRow, kNumJoints> ur3_dh() {
  // Joint 1 offset by π maps the DH base frame onto the controller's.
  return {{{0.0, M_PI / 2, 0.1519, M_PI},
           {-0.24365, 0.0, 0.0, 0.0},
           {-0.21325, 0.0, 0.0, 0.0},
           {0.0, M_PI / 2, 0.11235, 0.0},
           {0.0, -M_PI / 2, 0.08535, 0.0},
           {0.0, 0.0, 0.0819, 0.0}}};
}

Transform dh_transform(const DHRow& row, double q) {
  const double th = q + row.theta_offset;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Mat4 h;
  h << ct, -st * ca, st * sa, row.a * ct,
       st, ct * ca, -ct * sa, row.a * st,
       0.0, sa, ca, row.d,
       0.0, 0.0, 0.0, 1.0;
  return Transform::FromMatrix(h);
}

ChainFrames chain_frames(const ArmModel& arm, const JointVector& q) {
  ChainFrames out;
  out.frames[0] = arm.base;
  for (int i = 0; i < kNumJoints; ++i) {
    out.frames[i + 1] = out.frames[i] * dh_transform(arm.dh[i], q[i]);
  }
  out.end_effector = out.frames[kNumJoints] * arm.tool;
  return out;
}

Transform forward_kinematics(const ArmModel& arm, const JointVector& q) {
  return chain_frames(arm, q).end_effector;
}

Mat6 geometric_jacobian(const ArmModel& arm, const JointVector& q) {
  const ChainFrames c = chain_frames(arm, q);
  const Vec3& p = c.end_effector.position;
  Mat6 j;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 z = c.frames[i].rotation.matrix().col(2);
    j.block<3, 1>(0, i) = z.cross(p - c.frames[i].position);
    j.block<3, 1>(3, i) = z;
  }
  return j;
}

bool ClampResult::any() const {
  for (bool b : clamped) {
    if (b) return true;
  }
  return false;
}

ClampResult clamp_joints(const ArmModel& arm, const JointVector& q) {
  ClampResult r;
  r.q = q;
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < arm.q_min[i]) {
      r.q[i] = arm.q_min[i];
      r.clamped[i] = true;
    } else if (q[i] > arm.q_max[i]) {
      r.q[i] = arm.q_max[i];
      r.clamped[i] = true;
    }
  }
  return r;
}

WorkspaceBounds workspace_estimate(const ArmModel& arm, int n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 1) {
    throw std::invalid_argument("workspace_estimate: n_samples must be >= 1");
  }
  ArmModel local = arm;
  local.base = Transform::Identity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WorkspaceBounds b{Vec3::Constant(INFINITY), Vec3::Constant(-INFINITY)};
  for (int k = 0; k < n_samples; ++k) {
    JointVector q;
    for (int i = 0; i < kNumJoints; ++i) {
      q[i] = arm.q_min[i] + u(rng) * (arm.q_max[i] - arm.q_min[i]);
    }
    const Vec3 p = forward_kinematics(local, q).position;
    b.min = b.min.cwiseMin(p);
    b.max = b.max.cwiseMax(p);
  }
  return b;
}

}  // namespace dualarm
