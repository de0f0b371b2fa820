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

#include "dualarm/camera.hpp"

#include <cmath>
#include <string>

namespace dualarm {
namespace {

Eigen::Matrix<double, 2, 3> k_minus_s(const Mat2& k, const Vec2& s) {
  Eigen::Matrix<double, 2, 3> b;
  b << k, -s;
  return b;
}

Eigen::Matrix<double, 3, 6> twist_map(double sign, const Vec3& lever) {
  Eigen::Matrix<double, 3, 6> m;
  m << sign * Mat3::Identity(), -sign * skew(lever);
  return m;
}

// m_i for the camera on arm `a` observing the marker on arm `b`.
std::array<Vec3, 4> observe(const Transform& a, const Transform& b,
                            const VisionRig& rig) {
  const Transform cam_inv = (a * rig.mount).inverse();
  std::array<Vec3, 4> m;
  for (int i = 0; i < 4; ++i) m[i] = cam_inv * (b * rig.corners[i]);
  return m;
}

}  // namespace

const char* side_name(Side side) {
  return side == Side::kLeft ? "left" : "right";
}

void CameraIntrinsics::validate() const {
  if (!k.allFinite() || !(k(0, 0) > 0.0) || !(k(1, 1) > 0.0) ||
      std::abs(k.determinant()) < 1e-12) {
    throw std::invalid_argument(
        "CameraIntrinsics: k must be invertible with positive diagonal");
  }
  if (!principal_point.allFinite() || !(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("CameraIntrinsics: bad image geometry");
  }
}

void VisionRig::validate() const {
  intrinsics.validate();
  if (!(min_depth > 0.0)) {
    throw std::invalid_argument("VisionRig: min_depth must be positive");
  }
  double best = 0.0;
  for (int i = 1; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      best = std::max(best, (corners[i] - corners[0])
                                .cross(corners[j] - corners[0])
                                .norm());
    }
  }
  if (!(best > 1e-12)) {
    throw std::invalid_argument("VisionRig: marker corners are collinear");
  }
}

std::array<Vec3, 4> square_marker(double side, const Vec3& center,
                                  const Transform& frame) {
  const double h = side / 2.0;
  return {frame * (center + Vec3(-h, -h, 0.0)),
          frame * (center + Vec3(h, -h, 0.0)),
          frame * (center + Vec3(h, h, 0.0)),
          frame * (center + Vec3(-h, h, 0.0))};
}

DepthViolation::DepthViolation(Side camera, int corner, double depth)
    : std::runtime_error(std::string("depth violation: ") +
                         side_name(camera) + " camera corner " +
                         std::to_string(corner + 1) + " at depth " +
                         std::to_string(depth)),
      camera_(camera),
      corner_(corner),
      depth_(depth) {}

CameraPoints corners_in_camera(const DualPose& pose, const VisionRig& rig_l,
                               const VisionRig& rig_r) {
  return {observe(pose.left, pose.right, rig_l),
          observe(pose.right, pose.left, rig_r)};
}

Projection project(const Vec3& m, const CameraIntrinsics& intrinsics,
                   double min_depth) {
  if (!(m.z() > min_depth)) throw DepthViolation(Side::kLeft, -1, m.z());
  return {intrinsics.k * Vec2(m.x() / m.z(), m.y() / m.z()), m.z()};
}

Feature16 FeatureSet::stacked() const {
  Feature16 f;
  for (int i = 0; i < 4; ++i) {
    f.segment<2>(2 * i) = s_l[i];
    f.segment<2>(8 + 2 * i) = s_r[i];
  }
  return f;
}

FeatureSet feature_set(const DualPose& pose, const VisionRig& rig_l,
                       const VisionRig& rig_r) {
  const CameraPoints m = corners_in_camera(pose, rig_l, rig_r);
  FeatureSet f;
  for (int i = 0; i < 4; ++i) {
    if (!(m.left[i].z() > rig_l.min_depth)) {
      throw DepthViolation(Side::kLeft, i, m.left[i].z());
    }
    if (!(m.right[i].z() > rig_r.min_depth)) {
      throw DepthViolation(Side::kRight, i, m.right[i].z());
    }
    const Projection pl = project(m.left[i], rig_l.intrinsics, 0.0);
    const Projection pr = project(m.right[i], rig_r.intrinsics, 0.0);
    f.s_l[i] = pl.s;
    f.depths_l[i] = pl.depth;
    f.s_r[i] = pr.s;
    f.depths_r[i] = pr.depth;
  }
  return f;
}

std::vector<std::pair<Side, int>> out_of_image(const FeatureSet& features,
                                               const VisionRig& rig_l,
                                               const VisionRig& rig_r) {
  std::vector<std::pair<Side, int>> out;
  auto check = [&](Side side, const VisionRig& rig, const Vec2& s, int i) {
    const Vec2 px = s + rig.intrinsics.principal_point;
    if (px.x() < 0.0 || px.y() < 0.0 || px.x() > rig.intrinsics.width ||
        px.y() > rig.intrinsics.height) {
      out.emplace_back(side, i);
    }
  };
  for (int i = 0; i < 4; ++i) {
    check(Side::kLeft, rig_l, features.s_l[i], i);
    check(Side::kRight, rig_r, features.s_r[i], i);
  }
  return out;
}

Eigen::Matrix<double, 16, 6> InteractionBlocks::wrt_left() const {
  Eigen::Matrix<double, 16, 6> m;
  for (int i = 0; i < 4; ++i) {
    m.block<2, 6>(2 * i, 0) = left_to_left[i];
    m.block<2, 6>(8 + 2 * i, 0) = left_to_right[i];
  }
  return m;
}

Eigen::Matrix<double, 16, 6> InteractionBlocks::wrt_right() const {
  Eigen::Matrix<double, 16, 6> m;
  for (int i = 0; i < 4; ++i) {
    m.block<2, 6>(2 * i, 0) = right_to_left[i];
    m.block<2, 6>(8 + 2 * i, 0) = right_to_right[i];
  }
  return m;
}

InteractionBlocks interaction_blocks(const DualPose& pose,
                                     const VisionRig& rig_l,
                                     const VisionRig& rig_r,
                                     const FeatureSet& features) {
  const Mat3& rl = pose.left.rotation.matrix();
  const Mat3& rr = pose.right.rotation.matrix();
  const Vec3& xl = pose.left.position;
  const Vec3& xr = pose.right.position;
  const Mat3 cam_l_t = (rl * rig_l.mount.rotation.matrix()).transpose();
  const Mat3 cam_r_t = (rr * rig_r.mount.rotation.matrix()).transpose();

  InteractionBlocks b;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix<double, 2, 3> bl =
        k_minus_s(rig_l.intrinsics.k, features.s_l[i]) * cam_l_t /
        features.depths_l[i];
    const Vec3 wr = rr * rig_l.corners[i];
    b.left_to_left[i] = bl * twist_map(-1.0, wr + xr - xl);
    b.right_to_left[i] = bl * twist_map(1.0, wr);

    const Eigen::Matrix<double, 2, 3> br =
        k_minus_s(rig_r.intrinsics.k, features.s_r[i]) * cam_r_t /
        features.depths_r[i];
    const Vec3 wl = rl * rig_r.corners[i];
    b.left_to_right[i] = br * twist_map(1.0, wl);
    b.right_to_right[i] = br * twist_map(-1.0, wl + xl - xr);
  }
  return b;
}

Feature16 feature_rate(const InteractionBlocks& blocks, const Twist& v_l,
                       const Twist& v_r) {
  return blocks.wrt_left() * v_l.stacked() +
         blocks.wrt_right() * v_r.stacked();
}

}  // namespace dualarm
