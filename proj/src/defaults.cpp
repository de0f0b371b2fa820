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

#include "dualarm/defaults.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dualarm {
namespace {

constexpr double kDeg = M_PI / 180.0;
constexpr double kBaseOffset = 0.55;
constexpr double kMarkerSide = 0.05;

Transform yaw_about_z(double yaw, const Vec3& p) {
  return {Rotation::AxisAngle(Vec3::UnitZ(), yaw), p};
}

struct PathSpec {
  Vec3 b_pos, b_rpy, c_pos, c_rpy;
};

Waypoint make_waypoint(const std::string& name, const Vec3& position,
                       const Vec3& rpy) {
  Waypoint w;
  w.name = name;
  w.position = position;
  w.rpy = rpy;
  return w;
}

PathSpec path_spec(int path) {
  switch (path) {
    case 1:
      return {{0.13, -0.03, -0.02}, {M_PI / 10, -M_PI / 18, 0.0},
              {-0.03, 0.01, 0.0}, {-M_PI / 12, M_PI / 12, 0.0}};
    case 2:
      return {{0.0, -0.1, -0.05}, {0.0, -M_PI / 18, 0.0},
              {-0.1, 0.05, 0.05}, {M_PI / 18, 0.0, 0.0}};
    case 3:
      return {{-0.1, -0.05, 0.0}, {-M_PI / 12, -M_PI / 12, M_PI / 12},
              {0.1, -0.05, 0.0}, {-M_PI / 12, M_PI / 12, -M_PI / 10}};
  }
  throw std::invalid_argument("default_scenario: path must be 0, 1, 2 or 3");
}

}  // namespace

JointVector default_initial_joints() {
  JointVector q;
  q << -30.0, -140.0, -85.0, 45.0, 75.0, 0.0;
  return q * kDeg;
}

ArmModel default_arm(const Transform& base) {
  ArmModel a;
  a.base = base;
  a.dh = ur3_dh();
  a.q_min = JointVector::Constant(-2.0 * M_PI);
  a.q_max = JointVector::Constant(2.0 * M_PI);
  a.qd_min = JointVector::Constant(-M_PI);
  a.qd_max = JointVector::Constant(M_PI);
  return a;
}

Scenario default_scenario(int path) {
  Scenario s;
  const JointVector q0 = default_initial_joints();

  // Flange pose in the base frame at q0. With the left base yawed by ψ and the
  // right by ψ + π, the flange gap is (0, 2b) − R(ψ)2p in the plane; asking
  // it to lie along the left flange axis a with length g gives
  // |2p + g a| = 2b.
  const Transform flange = forward_kinematics(default_arm(Transform()), q0);
  const Vec2 p = flange.position.head<2>();
  const Vec2 a = flange.rotation.matrix().col(2).head<2>();
  const double qa = a.squaredNorm();
  const double qb = 4.0 * p.dot(a);
  const double qc = 4.0 * p.squaredNorm() - 4.0 * kBaseOffset * kBaseOffset;
  const double gap = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  const Vec2 v = 2.0 * p + gap * a;
  const double yaw = M_PI / 2 - std::atan2(v.y(), v.x());

  s.arm_l = default_arm(yaw_about_z(yaw, {0.0, -kBaseOffset, 0.0}));
  s.arm_r = default_arm(yaw_about_z(yaw + M_PI, {0.0, kBaseOffset, 0.0}));
  s.q0_l = q0;
  s.q0_r = q0;

  const Transform flange_l = forward_kinematics(s.arm_l, q0);
  const Transform flange_r = forward_kinematics(s.arm_r, q0);
  const Transform object =
      Transform::Translation(0.5 * (flange_l.position + flange_r.position));
  s.arm_l.tool = flange_l.inverse() * object;
  s.arm_r.tool = flange_r.inverse() * object;
  s.object_in_left = Transform();

  // Camera and marker side by side on each flange, both facing along the
  // flange axis.
  const Transform camera_on_flange = Transform::Translation({0.05, 0.06, 0.0});
  const Vec3 marker_center(-0.05, 0.06, 0.0);
  s.rig_l.mount = s.arm_l.tool.inverse() * camera_on_flange;
  s.rig_r.mount = s.arm_r.tool.inverse() * camera_on_flange;
  s.rig_l.corners =
      square_marker(kMarkerSide, marker_center, s.arm_r.tool.inverse());
  s.rig_r.corners =
      square_marker(kMarkerSide, marker_center, s.arm_l.tool.inverse());

  if (path == 0) {
    s.name = "hold";
    s.waypoints.push_back(make_waypoint("A", Vec3::Zero(), Vec3::Zero()));
    return s;
  }
  const PathSpec spec = path_spec(path);
  s.name = "path" + std::to_string(path);
  s.waypoints.push_back(make_waypoint("B", spec.b_pos, spec.b_rpy));
  s.waypoints.push_back(make_waypoint("C", spec.c_pos, spec.c_rpy));
  s.waypoints.push_back(make_waypoint("A", Vec3::Zero(), Vec3::Zero()));
  return s;
}

}  // namespace dualarm
