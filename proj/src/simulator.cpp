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

#include "dualarm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dualarm {
namespace {

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ScenarioError(key, message);
}

template <typename F>
void rethrow_as(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(key, e.what());
  }
}

FeatureSet substitute_depths(FeatureSet f, const DepthConfig& cfg) {
  for (int i = 0; i < 4; ++i) {
    switch (cfg.source) {
      case DepthSource::kTrue:
        break;
      case DepthSource::kConstant:
        f.depths_l[i] = f.depths_r[i] = cfg.value;
        break;
      case DepthSource::kScaled:
        f.depths_l[i] *= cfg.scale;
        f.depths_r[i] *= cfg.scale;
        break;
    }
  }
  return f;
}

std::string clamp_detail(const ClampResult& c, const char* side) {
  std::ostringstream os;
  os << side << " joints";
  for (int i = 0; i < kNumJoints; ++i) {
    if (c.clamped[i]) os << ' ' << i + 1;
  }
  return os.str();
}

}  // namespace

bool KinematicErrorModel::is_zero() const {
  auto row_zero = [](const DHRow& r) {
    return r.a == 0.0 && r.alpha == 0.0 && r.d == 0.0 && r.theta_offset == 0.0;
  };
  return joint_offsets_l.isZero(0.0) && joint_offsets_r.isZero(0.0) &&
         std::all_of(dh_perturbation_l.begin(), dh_perturbation_l.end(),
                     row_zero) &&
         std::all_of(dh_perturbation_r.begin(), dh_perturbation_r.end(),
                     row_zero) &&
         random_joint_offset == 0.0;
}

ArmModel believed_model(const ArmModel& arm,
                        const std::array<DHRow, kNumJoints>& perturbation) {
  ArmModel b = arm;
  for (int i = 0; i < kNumJoints; ++i) {
    b.dh[i].a += perturbation[i].a;
    b.dh[i].alpha += perturbation[i].alpha;
    b.dh[i].d += perturbation[i].d;
    b.dh[i].theta_offset += perturbation[i].theta_offset;
  }
  return b;
}

Transform waypoint_pose(const Waypoint& waypoint,
                        const Transform& initial_object) {
  const Rotation r = Rotation::RollPitchYaw(waypoint.rpy.x(), waypoint.rpy.y(),
                                            waypoint.rpy.z());
  return {r * initial_object.rotation,
          initial_object.position + waypoint.position};
}

void Scenario::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "dt", "must be positive");
  require(max_duration > 0.0, "max_duration", "must be positive");
  require(log_interval >= 0.0, "log_interval", "must be nonnegative");
  require(!waypoints.empty(), "waypoints", "must not be empty");
  for (size_t i = 0; i < waypoints.size(); ++i) {
    const Waypoint& w = waypoints[i];
    const std::string key = "waypoints." + std::to_string(i);
    require(w.threshold_m > 0.0, key + ".threshold_m", "must be positive");
    require(w.threshold_rad > 0.0, key + ".threshold_rad", "must be positive");
    require(w.dwell_s >= 0.0, key + ".dwell_s", "must be nonnegative");
    require(w.timeout_s > 0.0, key + ".timeout_s", "must be positive");
    require(w.position.allFinite() && w.rpy.allFinite(), key,
            "non-finite pose");
    if (w.gains) rethrow_as(key + ".gains", [&] { w.gains->validate(); });
  }
  rethrow_as("arms.left", [&] { arm_l.validate(); });
  rethrow_as("arms.right", [&] { arm_r.validate(); });
  rethrow_as("rigs.left", [&] { rig_l.validate(); });
  rethrow_as("rigs.right", [&] { rig_r.validate(); });
  rethrow_as("gains", [&] { gains.validate(); });
  rethrow_as("penalty", [&] { penalty.validate(); });
  require(error.random_joint_offset >= 0.0,
          "kinematic_error.random_joint_offset", "must be nonnegative");
  require(depth.source != DepthSource::kConstant || depth.value > 0.0,
          "depth.value", "must be positive");
  require(depth.source != DepthSource::kScaled || depth.scale > 0.0,
          "depth.scale", "must be positive");
}

WaypointSequencer::Decision WaypointSequencer::update(
    double translation_error, double rotation_error, const Waypoint& waypoint,
    double dt) {
  elapsed_ += dt;
  if (translation_error < waypoint.threshold_m &&
      rotation_error < waypoint.threshold_rad) {
    dwell_ += dt;
  } else {
    dwell_ = 0.0;
  }
  // Tolerate accumulated rounding in the dwell sum.
  if (dwell_ >= waypoint.dwell_s - 1e-9) return Decision::kAdvance;
  if (elapsed_ >= waypoint.timeout_s - 1e-9) return Decision::kTimeout;
  return Decision::kHold;
}

void WaypointSequencer::reset() {
  dwell_ = 0.0;
  elapsed_ = 0.0;
}

TrajectoryLog run(const Scenario& scenario) {
  scenario.validate();
  const Scenario& sc = scenario;
  TrajectoryLog log;
  log.reached_at.assign(sc.waypoints.size(), -1.0);

  KinematicErrorModel err = sc.error;
  if (err.random_joint_offset > 0.0) {
    std::mt19937_64 rng(sc.seed);
    std::uniform_real_distribution<double> u(-err.random_joint_offset,
                                             err.random_joint_offset);
    for (int i = 0; i < kNumJoints; ++i) err.joint_offsets_l[i] += u(rng);
    for (int i = 0; i < kNumJoints; ++i) err.joint_offsets_r[i] += u(rng);
  }
  const ArmModel belief_l = believed_model(sc.arm_l, err.dh_perturbation_l);
  const ArmModel belief_r = believed_model(sc.arm_r, err.dh_perturbation_r);

  auto true_pose = [&](const JointVector& ql, const JointVector& qr) {
    return DualPose{forward_kinematics(sc.arm_l, ql),
                    forward_kinematics(sc.arm_r, qr)};
  };

  // Grasp-time references. Poses are what the controller believes; features
  // are what the cameras see.
  const DualPose grasp_true = true_pose(sc.q0_l, sc.q0_r);
  const Transform relpose0 = grasp_true.left.inverse() * grasp_true.right;
  FeatureSet s_bar;
  try {
    s_bar = feature_set(grasp_true, sc.rig_l, sc.rig_r);
  } catch (const DepthViolation& e) {
    log.failure_reason = std::string("initial state: ") + e.what();
    return log;
  }
  const DualPose grasp_belief{
      forward_kinematics(belief_l, sc.q0_l + err.joint_offsets_l),
      forward_kinematics(belief_r, sc.q0_r + err.joint_offsets_r)};
  const ReferenceState base_refs(grasp_belief,
                                 grasp_belief.left * sc.object_in_left, s_bar);

  std::vector<ReferenceState> refs;
  for (const Waypoint& w : sc.waypoints) {
    refs.push_back(base_refs.with_desired_object(
        waypoint_pose(w, base_refs.initial_object())));
  }

  JointVector q_l = sc.start_l.value_or(sc.q0_l);
  JointVector q_r = sc.start_r.value_or(sc.q0_r);
  const long log_every =
      std::max(1L, std::lround(sc.log_interval / sc.dt));
  const long max_steps = std::lround(sc.max_duration / sc.dt);

  size_t wp = 0;
  WaypointSequencer seq;
  bool clamped_l = false, clamped_r = false, off_image = false;
  bool any_timeout = false;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    log.duration = t;
    const DualPose truth = true_pose(q_l, q_r);
    FeatureSet features;
    try {
      features = feature_set(truth, sc.rig_l, sc.rig_r);
    } catch (const DepthViolation& e) {
      log.failure_reason = e.what();
      log.events.push_back({t, "failure", e.what()});
      return log;
    }
    const bool outside =
        !out_of_image(features, sc.rig_l, sc.rig_r).empty();
    if (outside != off_image) {
      log.events.push_back(
          {t, "image_bounds", outside ? "corner left image" : "all in image"});
      off_image = outside;
    }

    const JointVector qb_l = q_l + err.joint_offsets_l;
    const JointVector qb_r = q_r + err.joint_offsets_r;
    ControllerInput in;
    in.pose = {forward_kinematics(belief_l, qb_l),
               forward_kinematics(belief_r, qb_r)};
    in.jacobians = {geometric_jacobian(belief_l, qb_l),
                    geometric_jacobian(belief_r, qb_r)};
    in.features = substitute_depths(features, sc.depth);

    const Waypoint& w = sc.waypoints[wp];
    const Gains& gains = w.gains ? *w.gains : sc.gains;
    JointPair cmd = control_step(in, refs[wp], sc.rig_l, sc.rig_r, gains);

    const ConstraintEval ce =
        joint_limit_constraint(qb_l, qb_r, belief_l, belief_r,
                               sc.penalty.margin, sc.penalty.sharpness);
    double psi = 0.0;
    try {
      psi = penalty(ce.h, sc.penalty.h_bar);
      const PenaltyGradient pg = penalty_gradient(ce, sc.penalty);
      cmd.left -= pg.left;
      cmd.right -= pg.right;
    } catch (const ConstraintViolated& e) {
      log.failure_reason = e.what();
      log.events.push_back({t, "failure", e.what()});
      return log;
    }
    const ScaledCommand sl =
        scale_inputs(cmd.left, belief_l.qd_min, belief_l.qd_max);
    const ScaledCommand sr =
        scale_inputs(cmd.right, belief_r.qd_min, belief_r.qd_max);

    // Sequencing runs on believed poses only.
    const DualPose& target = refs[wp].desired_arms();
    const PoseError el = pose_error(in.pose.left, target.left);
    const PoseError er = pose_error(in.pose.right, target.right);
    const WaypointSequencer::Decision d =
        seq.update(std::max(el.translation, er.translation),
                   std::max(el.rotation, er.rotation), w, sc.dt);
    const bool last_step =
        (d != WaypointSequencer::Decision::kHold &&
         wp + 1 == sc.waypoints.size()) ||
        k >= max_steps;

    if (k % log_every == 0 || last_step) {
      LogRow row;
      row.t = t;
      row.q_l = q_l;
      row.q_r = q_r;
      row.qd_l = sl.qd;
      row.qd_r = sr.qd;
      row.v = value_V(in.pose, features, refs[wp], gains);
      row.psi = psi;
      row.alpha_l = sl.alpha;
      row.alpha_r = sr.alpha;
      row.fe = features.stacked() - s_bar.stacked();
      row.fe_norm = row.fe.norm();
      const Transform rel = truth.left.inverse() * truth.right;
      const PoseError drift = pose_error(relpose0, rel);
      row.relpose_trans = drift.translation;
      row.relpose_rot = drift.rotation;
      row.waypoint_index = static_cast<int>(wp);
      log.rows.push_back(row);
    }

    if (d != WaypointSequencer::Decision::kHold) {
      if (d == WaypointSequencer::Decision::kAdvance) {
        log.reached_at[wp] = t;
        log.events.push_back({t, "waypoint_reached", w.name});
      } else {
        any_timeout = true;
        log.events.push_back({t, "waypoint_timeout", w.name});
      }
      if (wp + 1 == sc.waypoints.size()) {
        log.success = !any_timeout;
        if (any_timeout) log.failure_reason = "waypoint timeout";
        return log;
      }
      ++wp;
      seq.reset();
    }
    if (k >= max_steps) {
      log.failure_reason = "max_duration reached";
      log.events.push_back({t, "failure", log.failure_reason});
      return log;
    }

    const ClampResult cl = clamp_joints(sc.arm_l, q_l + sl.qd * sc.dt);
    const ClampResult cr = clamp_joints(sc.arm_r, q_r + sr.qd * sc.dt);
    if (cl.any() != clamped_l) {
      log.events.push_back(
          {t, cl.any() ? "clamp" : "unclamp", clamp_detail(cl, "left")});
      clamped_l = cl.any();
    }
    if (cr.any() != clamped_r) {
      log.events.push_back(
          {t, cr.any() ? "clamp" : "unclamp", clamp_detail(cr, "right")});
      clamped_r = cr.any();
    }
    q_l = cl.q;
    q_r = cr.q;
  }
}

Summary metrics_summary(const TrajectoryLog& log) {
  if (log.rows.empty()) {
    throw std::invalid_argument("metrics_summary: empty log");
  }
  Summary s;
  s.success = log.success;
  s.duration_s = log.duration;
  s.failure_reason = log.failure_reason;
  double sum = 0.0;
  for (const LogRow& r : log.rows) {
    s.max_fe_norm = std::max(s.max_fe_norm, r.fe_norm);
    sum += r.fe_norm;
    for (int i = 0; i < 8; ++i) {
      s.corner_radius_px[i] =
          std::max(s.corner_radius_px[i], r.fe.segment<2>(2 * i).norm());
    }
    s.max_relpose_trans_m = std::max(s.max_relpose_trans_m, r.relpose_trans);
    s.max_relpose_rot_rad = std::max(s.max_relpose_rot_rad, r.relpose_rot);
  }
  s.mean_fe_norm = sum / static_cast<double>(log.rows.size());
  return s;
}

}  // namespace dualarm
