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
#include <utility>
#include <vector>
#include <stdexcept>

#include "dualarm/se3.hpp"

namespace dualarm {

using Feature16 = Eigen::Matrix<double, 16, 1>;
using Block26 = Eigen::Matrix<double, 2, 6>;

enum class Side { kLeft, kRight };
const char* side_name(Side side);

struct CameraIntrinsics {
  // Maps normalized coordinates to centered pixels: s = k ζ.
  Mat2 k = Vec2(600.0, 600.0).asDiagonal();
  // Used only for rendering and image-bound diagnostics.
  Vec2 principal_point = Vec2(320.0, 240.0);
  double width = 640.0;
  double height = 480.0;

  void validate() const;
};

// Camera carried by one arm looking at the marker carried by the other.
struct VisionRig {
  // Camera pose in the carrying arm's end-effector frame.
  Transform mount;
  // Observed marker corners in the marked arm's end-effector frame.
  std::array<Vec3, 4> corners{};
  CameraIntrinsics intrinsics;
  double min_depth = 0.05;

  void validate() const;
};

// Square marker of the given side centered at `center` in the z = 0 plane of
// `frame`, corners counterclockwise from (−side/2, −side/2).
std::array<Vec3, 4> square_marker(double side, const Vec3& center,
                                  const Transform& frame = Transform());

struct DualPose {
  Transform left;
  Transform right;
};

class DepthViolation : public std::runtime_error {
 public:
  DepthViolation(Side camera, int corner, double depth);
  Side camera() const { return camera_; }
  int corner() const { return corner_; }
  double depth() const { return depth_; }

 private:
  Side camera_;
  int corner_;
  double depth_;
};

struct CameraPoints {
  std::array<Vec3, 4> left;   // m_li: right marker seen by the left camera.
  std::array<Vec3, 4> right;  // m_ri: left marker seen by the right camera.
};

// rig_l is carried by the left arm and observes the right arm's marker.
CameraPoints corners_in_camera(const DualPose& pose, const VisionRig& rig_l,
                               const VisionRig& rig_r);

struct Projection {
  Vec2 s;
  double depth = 0.0;
};
// Throws DepthViolation (corner -1, left camera) when m_z <= min_depth;
// feature_set rethrows with the real corner identity.
Projection project(const Vec3& m, const CameraIntrinsics& intrinsics,
                   double min_depth);

struct FeatureSet {
  std::array<Vec2, 4> s_l{};
  std::array<Vec2, 4> s_r{};
  std::array<double, 4> depths_l{};
  std::array<double, 4> depths_r{};

  // Order l1x, l1y, ..., l4y, r1x, ..., r4y.
  Feature16 stacked() const;
};

FeatureSet feature_set(const DualPose& pose, const VisionRig& rig_l,
                       const VisionRig& rig_r);

// Corners that fall outside either image, as (side, corner) pairs.
std::vector<std::pair<Side, int>> out_of_image(const FeatureSet& features,
                                               const VisionRig& rig_l,
                                               const VisionRig& rig_r);

struct InteractionBlocks {
  // [i] maps a twist of the arm in the first position to ṡ of corner i of
  // the camera in the second position.
  std::array<Block26, 4> left_to_left{};    // L^l_li
  std::array<Block26, 4> right_to_left{};   // L^r_li
  std::array<Block26, 4> left_to_right{};   // L^l_ri
  std::array<Block26, 4> right_to_right{};  // L^r_ri

  // 16×6 columns acting on the left and right twists.
  Eigen::Matrix<double, 16, 6> wrt_left() const;
  Eigen::Matrix<double, 16, 6> wrt_right() const;
};

// Depths are taken from `features`, so substituting them changes L only.
InteractionBlocks interaction_blocks(const DualPose& pose,
                                     const VisionRig& rig_l,
                                     const VisionRig& rig_r,
                                     const FeatureSet& features);

Feature16 feature_rate(const InteractionBlocks& blocks, const Twist& v_l,
                       const Twist& v_r);

}  // namespace dualarm
