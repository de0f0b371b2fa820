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

#include "dualarm/se3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualarm {
namespace {

constexpr double kReorthonormalizeThreshold = 1e-12;

}  // namespace

Rotation::Rotation(const Mat3& m) : m_(m) {
  if (!m.allFinite() || orthonormality_error() > kSe3Tolerance) {
    throw std::invalid_argument("Rotation: matrix is not a proper rotation");
  }
}

Rotation Rotation::Exp(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 k = skew(w);
  Mat3 r;
  if (theta < 1e-8) {
    // Second-order series; exact to double precision at this size.
    r = Mat3::Identity() + k + 0.5 * k * k;
  } else {
    const double a = std::sin(theta) / theta;
    const double b = (1.0 - std::cos(theta)) / (theta * theta);
    r = Mat3::Identity() + a * k + b * k * k;
  }
  return Unchecked(r);
}

Rotation Rotation::AxisAngle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) {
    throw std::invalid_argument("Rotation::AxisAngle: zero axis");
  }
  return Exp(axis / n * angle);
}

Rotation Rotation::RollPitchYaw(double roll, double pitch, double yaw) {
  const Mat3 m = (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                  Eigen::AngleAxisd(roll, Vec3::UnitX()))
                     .toRotationMatrix();
  return Unchecked(m);
}

Rotation Rotation::Project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0
                ? -1.0
                : 1.0;
  return Unchecked(svd.matrixU() * d * svd.matrixV().transpose());
}

double Rotation::angle() const {
  const double c = std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0);
  // atan2 form keeps precision near 0 and π.
  const double s = sk_vee(m_).norm();
  return std::atan2(s, c);
}

double Rotation::orthonormality_error() const {
  const double ortho =
      (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(m_.determinant() - 1.0));
}

Transform Transform::FromMatrix(const Mat4& h) {
  return {Rotation(Mat3(h.topLeftCorner<3, 3>())), h.topRightCorner<3, 1>()};
}

Mat4 Transform::matrix() const {
  Mat4 h = Mat4::Identity();
  h.topLeftCorner<3, 3>() = rotation.matrix();
  h.topRightCorner<3, 1>() = position;
  return h;
}

Transform Transform::inverse() const {
  const Rotation rt = rotation.transpose();
  return {rt, -(rt * position)};
}

Transform Transform::operator*(const Transform& other) const {
  return {rotation * other.rotation, rotation * other.position + position};
}

Vec6 Twist::stacked() const {
  Vec6 v;
  v << linear, angular;
  return v;
}

Twist Twist::FromStacked(const Vec6& v) {
  return {v.head<3>(), v.tail<3>()};
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).norm() >= kSe3Tolerance) {
    throw std::invalid_argument("vee: matrix is not antisymmetric");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Vec3 sk_vee(const Mat3& m) {
  const Mat3 a = 0.5 * (m - m.transpose());
  return {a(2, 1), a(0, 2), a(1, 0)};
}

Rotation rot_step(const Rotation& r, const Vec3& omega, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rot_step: dt must be positive");
  }
  Rotation next = Rotation::Exp(omega * dt) * r;
  if (next.orthonormality_error() > kReorthonormalizeThreshold) {
    next = Rotation::Project(next.matrix());
  }
  return next;
}

PoseError pose_error(const Transform& a, const Transform& b) {
  return {(a.position - b.position).norm(),
          (a.rotation.transpose() * b.rotation).angle()};
}

}  // namespace dualarm
