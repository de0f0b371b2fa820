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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualarm/arm.hpp"
#include "dualarm/camera.hpp"
#include "dualarm/constraints.hpp"
#include "dualarm/objectives.hpp"

namespace dualarm {

// Raised by Scenario::validate; key() is the dotted scenario key at fault.
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(const std::string& key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Errors seen by the controller but not by the plant.
struct KinematicErrorModel {
  // Added to the true joint readings.
  JointVector joint_offsets_l = JointVector::Zero();
  JointVector joint_offsets_r = JointVector::Zero();
  // Added row by row to the believed DH parameters.
  std::array<DHRow, kNumJoints> dh_perturbation_l{};
  std::array<DHRow, kNumJoints> dh_perturbation_r{};
  // When positive, each joint offset additionally gets U(−a, a) drawn from
  // the scenario seed.
  double random_joint_offset = 0.0;

  bool is_zero() const;
};

ArmModel believed_model(const ArmModel& arm,
                        const std::array<DHRow, kNumJoints>& perturbation);

enum class DepthSource { kTrue, kConstant, kScaled };

// Depths fed to the interaction blocks.
struct DepthConfig {
  DepthSource source = DepthSource::kTrue;
  double value = 0.25;  // kConstant
  double scale = 1.0;   // kScaled
};

struct Waypoint {
  std::string name;
  // Offset of the object from its grasp pose, world axes.
  Vec3 position = Vec3::Zero();
  // Roll, pitch, yaw of the object relative to its grasp orientation, world
  // axes.
  Vec3 rpy = Vec3::Zero();
  double threshold_m = 2e-3;
  double threshold_rad = 0.5 * M_PI / 180.0;
  double dwell_s = 0.2;
  double timeout_s = 1200.0;
  std::optional<Gains> gains;
};

Transform waypoint_pose(const Waypoint& waypoint,
                        const Transform& initial_object);

struct Scenario {
  std::string name = "scenario";
  ArmModel arm_l;
  ArmModel arm_r;
  KinematicErrorModel error;
  VisionRig rig_l;  // Carried by the left arm, sees the right marker.
  VisionRig rig_r;
  // Grasp configuration; references are captured here.
  JointVector q0_l = JointVector::Zero();
  JointVector q0_r = JointVector::Zero();
  // Optional start configuration, defaulting to the grasp.
  std::optional<JointVector> start_l;
  std::optional<JointVector> start_r;
  // Object frame in the left end-effector frame at grasp time.
  Transform object_in_left;
  Gains gains;
  PenaltyConfig penalty;
  DepthConfig depth;
  std::vector<Waypoint> waypoints;
  double dt = 1e-3;
  double max_duration = 3600.0;
  double log_interval = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LogRow {
  double t = 0.0;
  JointVector q_l, q_r, qd_l, qd_r;
  ObjectiveValues v;
  double psi = 0.0;
  double alpha_l = 1.0;
  double alpha_r = 1.0;
  Feature16 fe;
  double fe_norm = 0.0;
  double relpose_trans = 0.0;
  double relpose_rot = 0.0;
  int waypoint_index = 0;
};

struct LogEvent {
  double t = 0.0;
  std::string kind;
  std::string detail;
};

struct TrajectoryLog {
  std::vector<LogRow> rows;
  std::vector<LogEvent> events;
  bool success = false;
  std::string failure_reason;
  double duration = 0.0;
  // Time each waypoint was reached; negative when it timed out or was never
  // reached.
  std::vector<double> reached_at;
};

// Advances when both errors stay under threshold for a contiguous dwell, or
// when the waypoint has been active for its timeout.
class WaypointSequencer {
 public:
  enum class Decision { kHold, kAdvance, kTimeout };

  Decision update(double translation_error, double rotation_error,
                  const Waypoint& waypoint, double dt);
  void reset();
  double elapsed() const { return elapsed_; }

 private:
  double dwell_ = 0.0;
  double elapsed_ = 0.0;
};

// Closed-loop simulation. Never throws for depth or constraint violations;
// those end the run with failure_reason set. Throws ScenarioError on an
// invalid scenario.
TrajectoryLog run(const Scenario& scenario);

struct Summary {
  bool success = false;
  double duration_s = 0.0;
  double max_fe_norm = 0.0;
  double mean_fe_norm = 0.0;
  std::array<double, 8> corner_radius_px{};
  double max_relpose_trans_m = 0.0;
  double max_relpose_rot_rad = 0.0;
  std::string failure_reason;
};

// Requires a non-empty log.
Summary metrics_summary(const TrajectoryLog& log);

}  // namespace dualarm
