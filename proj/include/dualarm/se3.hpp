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

#include <Eigen/Dense>

namespace dualarm {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Tolerance used when validating orthonormality and antisymmetry.
inline constexpr double kSe3Tolerance = 1e-9;

// A proper rotation matrix. Construction from an arbitrary matrix validates
// RᵀR = I and det R = +1 to within kSe3Tolerance.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  explicit Rotation(const Mat3& m);

  static Rotation Identity() { return Rotation(); }
  // Exponential map of a rotation vector (Rodrigues).
  static Rotation Exp(const Vec3& rotation_vector);
  static Rotation AxisAngle(const Vec3& axis, double angle);
  // R = Rz(yaw) Ry(pitch) Rx(roll).
  static Rotation RollPitchYaw(double roll, double pitch, double yaw);
  // Nearest rotation in the Frobenius sense (polar decomposition).
  static Rotation Project(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const { return Unchecked(m_.transpose()); }
  Rotation inverse() const { return transpose(); }

  // Geodesic angle in [0, π].
  double angle() const;
  // Largest |RᵀR − I| entry together with |det R − 1|.
  double orthonormality_error() const;

  Rotation operator*(const Rotation& other) const {
    return Unchecked(m_ * other.m_);
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  static Rotation Unchecked(const Mat3& m) {
    Rotation r;
    r.m_ = m;
    return r;
  }
  Mat3 m_;
};

// Rigid transform (R, x): maps frame coordinates p to R p + x.
struct Transform {
  Rotation rotation;
  Vec3 position = Vec3::Zero();

  static Transform Identity() { return {}; }
  static Transform FromMatrix(const Mat4& h);
  static Transform Translation(const Vec3& p) { return {Rotation(), p}; }

  Mat4 matrix() const;
  Transform inverse() const;
  Transform operator*(const Transform& other) const;
  Vec3 operator*(const Vec3& point) const {
    return rotation * point + position;
  }
};

// Spatial velocity stacked as (υ; ω), linear block first.
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  Vec6 stacked() const;
  static Twist FromStacked(const Vec6& v);
};

// v× such that skew(v) u = v × u.
Mat3 skew(const Vec3& v);

// Inverse of skew. Throws std::invalid_argument when ‖M + Mᵀ‖ exceeds
// kSe3Tolerance.
Vec3 vee(const Mat3& m);

// vee of the antisymmetric part (M − Mᵀ)/2.
Vec3 sk_vee(const Mat3& m);

// exp(skew(ω dt)) R. Requires dt > 0.
Rotation rot_step(const Rotation& r, const Vec3& omega, double dt);

// Translation distance and geodesic angle between two poses.
struct PoseError {
  double translation = 0.0;
  double rotation = 0.0;
};
PoseError pose_error(const Transform& a, const Transform& b);

}  // namespace dualarm
