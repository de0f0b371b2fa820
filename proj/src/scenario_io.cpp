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

#include "dualarm/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dualarm {
namespace {

using nlohmann::json;

std::string join(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

template <int N>
json vec_to_json(const Eigen::Matrix<double, N, 1>& v) {
  json j = json::array();
  for (int i = 0; i < N; ++i) j.push_back(v[i]);
  return j;
}

double read_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ScenarioError(key, "expected a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> read_vec(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != static_cast<size_t>(N)) {
    throw ScenarioError(key, "expected an array of " + std::to_string(N) +
                                 " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    v[i] = read_number(j[i], key + "." + std::to_string(i));
  }
  return v;
}

json transform_to_json(const Transform& t) {
  json r = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) r.push_back(t.rotation.matrix()(i, k));
  }
  return {{"rotation", r}, {"position", vec_to_json<3>(t.position)}};
}

Transform read_transform(const json& j, const std::string& key) {
  Transform t;
  if (j.contains("rotation")) {
    const auto flat = read_vec<9>(j["rotation"], key + ".rotation");
    Mat3 m;
    m << flat[0], flat[1], flat[2], flat[3], flat[4], flat[5], flat[6],
        flat[7], flat[8];
    try {
      t.rotation = Rotation(m);
    } catch (const std::invalid_argument&) {
      throw ScenarioError(key + ".rotation", "not a proper rotation");
    }
  }
  if (j.contains("position")) {
    t.position = read_vec<3>(j["position"], key + ".position");
  }
  return t;
}

json dh_to_json(const std::array<DHRow, kNumJoints>& dh) {
  json j = json::array();
  for (const DHRow& r : dh) j.push_back({r.a, r.alpha, r.d, r.theta_offset});
  return j;
}

std::array<DHRow, kNumJoints> read_dh(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != kNumJoints) {
    throw ScenarioError(key, "expected 6 rows [a, alpha, d, theta_offset]");
  }
  std::array<DHRow, kNumJoints> dh;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto v = read_vec<4>(j[i], key + "." + std::to_string(i));
    dh[i] = {v[0], v[1], v[2], v[3]};
  }
  return dh;
}

json gains_to_json(const Gains& g) {
  return {{"w_d", g.w_d},
          {"w_t", g.w_t},
          {"w_s", g.w_s},
          {"feature_scale", g.feature_scale}};
}

Gains read_gains(const json& j, const std::string& key, Gains g = {}) {
  if (j.contains("w_d")) g.w_d = read_number(j["w_d"], key + ".w_d");
  if (j.contains("w_t")) g.w_t = read_number(j["w_t"], key + ".w_t");
  if (j.contains("w_s")) g.w_s = read_number(j["w_s"], key + ".w_s");
  if (j.contains("feature_scale")) {
    g.feature_scale = read_number(j["feature_scale"], key + ".feature_scale");
  }
  return g;
}

json arm_to_json(const ArmModel& a, const JointVector& q0,
                 const std::optional<JointVector>& start) {
  json j = {{"base", transform_to_json(a.base)},
            {"dh", dh_to_json(a.dh)},
            {"tool", transform_to_json(a.tool)},
            {"q_min", vec_to_json<6>(a.q_min)},
            {"q_max", vec_to_json<6>(a.q_max)},
            {"qd_min", vec_to_json<6>(a.qd_min)},
            {"qd_max", vec_to_json<6>(a.qd_max)},
            {"q0", vec_to_json<6>(q0)}};
  if (start) j["q_start"] = vec_to_json<6>(*start);
  return j;
}

void read_arm(const json& j, const std::string& key, ArmModel& a,
              JointVector& q0, std::optional<JointVector>& start) {
  if (j.contains("base")) a.base = read_transform(j["base"], key + ".base");
  if (j.contains("dh")) a.dh = read_dh(j["dh"], key + ".dh");
  if (j.contains("tool")) a.tool = read_transform(j["tool"], key + ".tool");
  if (j.contains("q_min")) a.q_min = read_vec<6>(j["q_min"], key + ".q_min");
  if (j.contains("q_max")) a.q_max = read_vec<6>(j["q_max"], key + ".q_max");
  if (j.contains("qd_min")) {
    a.qd_min = read_vec<6>(j["qd_min"], key + ".qd_min");
  }
  if (j.contains("qd_max")) {
    a.qd_max = read_vec<6>(j["qd_max"], key + ".qd_max");
  }
  if (j.contains("q0")) q0 = read_vec<6>(j["q0"], key + ".q0");
  if (j.contains("q_start")) {
    start = read_vec<6>(j["q_start"], key + ".q_start");
  }
}

json rig_to_json(const VisionRig& r) {
  json corners = json::array();
  for (const Vec3& c : r.corners) corners.push_back(vec_to_json<3>(c));
  const CameraIntrinsics& k = r.intrinsics;
  return {{"mount", transform_to_json(r.mount)},
          {"corners", corners},
          {"intrinsics",
           {{"fx", k.k(0, 0)},
            {"fy", k.k(1, 1)},
            {"skew", k.k(0, 1)},
            {"cx", k.principal_point.x()},
            {"cy", k.principal_point.y()},
            {"width", k.width},
            {"height", k.height}}},
          {"min_depth", r.min_depth}};
}

void read_rig(const json& j, const std::string& key, VisionRig& r) {
  if (j.contains("mount")) r.mount = read_transform(j["mount"], key + ".mount");
  if (j.contains("corners")) {
    const json& c = j["corners"];
    if (!c.is_array() || c.size() != 4) {
      throw ScenarioError(key + ".corners", "expected exactly 4 corners");
    }
    for (int i = 0; i < 4; ++i) {
      r.corners[i] = read_vec<3>(c[i], key + ".corners." + std::to_string(i));
    }
  }
  if (j.contains("intrinsics")) {
    const json& in = j["intrinsics"];
    const std::string ik = key + ".intrinsics";
    CameraIntrinsics& k = r.intrinsics;
    if (in.contains("fx")) k.k(0, 0) = read_number(in["fx"], ik + ".fx");
    if (in.contains("fy")) k.k(1, 1) = read_number(in["fy"], ik + ".fy");
    if (in.contains("skew")) k.k(0, 1) = read_number(in["skew"], ik + ".skew");
    if (in.contains("cx")) {
      k.principal_point.x() = read_number(in["cx"], ik + ".cx");
    }
    if (in.contains("cy")) {
      k.principal_point.y() = read_number(in["cy"], ik + ".cy");
    }
    if (in.contains("width")) k.width = read_number(in["width"], ik + ".width");
    if (in.contains("height")) {
      k.height = read_number(in["height"], ik + ".height");
    }
  }
  if (j.contains("min_depth")) {
    r.min_depth = read_number(j["min_depth"], key + ".min_depth");
  }
}

const char* depth_source_name(DepthSource s) {
  switch (s) {
    case DepthSource::kTrue:
      return "true";
    case DepthSource::kConstant:
      return "constant";
    case DepthSource::kScaled:
      return "scaled";
  }
  return "true";
}

// Every key of `given` must appear in `canonical`.
void check_known(const json& given, const json& canonical,
                 const std::string& path) {
  if (given.is_object()) {
    for (auto it = given.begin(); it != given.end(); ++it) {
      const std::string key = join(path, it.key());
      if (!canonical.is_object() || !canonical.contains(it.key())) {
        throw ScenarioError(key, "unknown key");
      }
      check_known(it.value(), canonical[it.key()], key);
    }
  } else if (given.is_array() && canonical.is_array() &&
             given.size() == canonical.size()) {
    for (size_t i = 0; i < given.size(); ++i) {
      check_known(given[i], canonical[i], join(path, std::to_string(i)));
    }
  }
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json waypoints = json::array();
  for (const Waypoint& w : s.waypoints) {
    json j = {{"name", w.name},
              {"position", vec_to_json<3>(w.position)},
              {"rpy", vec_to_json<3>(w.rpy)},
              {"threshold_m", w.threshold_m},
              {"threshold_rad", w.threshold_rad},
              {"dwell_s", w.dwell_s},
              {"timeout_s", w.timeout_s}};
    if (w.gains) j["gains"] = gains_to_json(*w.gains);
    waypoints.push_back(j);
  }
  return {
      {"name", s.name},
      {"dt", s.dt},
      {"max_duration", s.max_duration},
      {"log_interval", s.log_interval},
      {"seed", s.seed},
      {"gains", gains_to_json(s.gains)},
      {"penalty",
       {{"h_bar", s.penalty.h_bar},
        {"sharpness", s.penalty.sharpness},
        {"margin", s.penalty.margin}}},
      {"depth",
       {{"source", depth_source_name(s.depth.source)},
        {"value", s.depth.value},
        {"scale", s.depth.scale}}},
      {"arms",
       {{"left", arm_to_json(s.arm_l, s.q0_l, s.start_l)},
        {"right", arm_to_json(s.arm_r, s.q0_r, s.start_r)}}},
      {"rigs", {{"left", rig_to_json(s.rig_l)}, {"right", rig_to_json(s.rig_r)}}},
      {"object_in_left", transform_to_json(s.object_in_left)},
      {"kinematic_error",
       {{"joint_offsets_left", vec_to_json<6>(s.error.joint_offsets_l)},
        {"joint_offsets_right", vec_to_json<6>(s.error.joint_offsets_r)},
        {"dh_perturbation_left", dh_to_json(s.error.dh_perturbation_l)},
        {"dh_perturbation_right", dh_to_json(s.error.dh_perturbation_r)},
        {"random_joint_offset", s.error.random_joint_offset}}},
      {"waypoints", waypoints}};
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("", "expected a JSON object");
  Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ScenarioError("name", "expected text");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("dt")) s.dt = read_number(doc["dt"], "dt");
  if (doc.contains("max_duration")) {
    s.max_duration = read_number(doc["max_duration"], "max_duration");
  }
  if (doc.contains("log_interval")) {
    s.log_interval = read_number(doc["log_interval"], "log_interval");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ScenarioError("seed", "expected a nonnegative integer");
    }
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("gains")) s.gains = read_gains(doc["gains"], "gains");
  if (doc.contains("penalty")) {
    const json& p = doc["penalty"];
    if (p.contains("h_bar")) {
      s.penalty.h_bar = read_number(p["h_bar"], "penalty.h_bar");
    }
    if (p.contains("sharpness")) {
      s.penalty.sharpness = read_number(p["sharpness"], "penalty.sharpness");
    }
    if (p.contains("margin")) {
      s.penalty.margin = read_number(p["margin"], "penalty.margin");
    }
  }
  if (doc.contains("depth")) {
    const json& d = doc["depth"];
    if (d.contains("source")) {
      const std::string src = d["source"].is_string()
                                  ? d["source"].get<std::string>()
                                  : std::string();
      if (src == "true") {
        s.depth.source = DepthSource::kTrue;
      } else if (src == "constant") {
        s.depth.source = DepthSource::kConstant;
      } else if (src == "scaled") {
        s.depth.source = DepthSource::kScaled;
      } else {
        throw ScenarioError("depth.source",
                            "expected \"true\", \"constant\" or \"scaled\"");
      }
    }
    if (d.contains("value")) s.depth.value = read_number(d["value"], "depth.value");
    if (d.contains("scale")) s.depth.scale = read_number(d["scale"], "depth.scale");
  }
  if (doc.contains("arms")) {
    const json& a = doc["arms"];
    if (a.contains("left")) {
      read_arm(a["left"], "arms.left", s.arm_l, s.q0_l, s.start_l);
    }
    if (a.contains("right")) {
      read_arm(a["right"], "arms.right", s.arm_r, s.q0_r, s.start_r);
    }
  }
  if (doc.contains("rigs")) {
    const json& r = doc["rigs"];
    if (r.contains("left")) read_rig(r["left"], "rigs.left", s.rig_l);
    if (r.contains("right")) read_rig(r["right"], "rigs.right", s.rig_r);
  }
  if (doc.contains("object_in_left")) {
    s.object_in_left = read_transform(doc["object_in_left"], "object_in_left");
  }
  if (doc.contains("kinematic_error")) {
    const json& e = doc["kinematic_error"];
    const std::string k = "kinematic_error";
    if (e.contains("joint_offsets_left")) {
      s.error.joint_offsets_l =
          read_vec<6>(e["joint_offsets_left"], k + ".joint_offsets_left");
    }
    if (e.contains("joint_offsets_right")) {
      s.error.joint_offsets_r =
          read_vec<6>(e["joint_offsets_right"], k + ".joint_offsets_right");
    }
    if (e.contains("dh_perturbation_left")) {
      s.error.dh_perturbation_l =
          read_dh(e["dh_perturbation_left"], k + ".dh_perturbation_left");
    }
    if (e.contains("dh_perturbation_right")) {
      s.error.dh_perturbation_r =
          read_dh(e["dh_perturbation_right"], k + ".dh_perturbation_right");
    }
    if (e.contains("random_joint_offset")) {
      s.error.random_joint_offset =
          read_number(e["random_joint_offset"], k + ".random_joint_offset");
    }
  }
  if (doc.contains("waypoints")) {
    const json& ws = doc["waypoints"];
    if (!ws.is_array()) throw ScenarioError("waypoints", "expected an array");
    for (size_t i = 0; i < ws.size(); ++i) {
      const json& j = ws[i];
      const std::string k = "waypoints." + std::to_string(i);
      Waypoint w;
      w.name = j.contains("name") && j["name"].is_string()
                   ? j["name"].get<std::string>()
                   : std::to_string(i);
      if (j.contains("position")) {
        w.position = read_vec<3>(j["position"], k + ".position");
      }
      if (j.contains("rpy")) w.rpy = read_vec<3>(j["rpy"], k + ".rpy");
      if (j.contains("threshold_m")) {
        w.threshold_m = read_number(j["threshold_m"], k + ".threshold_m");
      }
      if (j.contains("threshold_rad")) {
        w.threshold_rad = read_number(j["threshold_rad"], k + ".threshold_rad");
      }
      if (j.contains("dwell_s")) {
        w.dwell_s = read_number(j["dwell_s"], k + ".dwell_s");
      }
      if (j.contains("timeout_s")) {
        w.timeout_s = read_number(j["timeout_s"], k + ".timeout_s");
      }
      if (j.contains("gains")) {
        w.gains = read_gains(j["gains"], k + ".gains", s.gains);
      }
      s.waypoints.push_back(w);
    }
  }
  check_known(doc, scenario_to_json(s), "");
  return s;
}

void apply_override(json& doc, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ScenarioError(assignment, "override must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() &&
               part.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(part) < node->size()) {
      node = &(*node)[std::stoul(part)];
    } else {
      throw ScenarioError(key, "unknown scenario key");
    }
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *node = value;
}

Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario", "cannot open " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ScenarioError("scenario", "invalid JSON in " + path);
  }
  json canonical = scenario_to_json(scenario_from_json(doc));
  for (const std::string& o : overrides) apply_override(canonical, o);
  Scenario s = scenario_from_json(canonical);
  s.validate();
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> trajectory_columns() {
  std::vector<std::string> c = {"t"};
  for (const char* g : {"q_l", "q_r", "qd_l", "qd_r"}) {
    for (int i = 1; i <= kNumJoints; ++i) {
      c.push_back(std::string(g) + "_" + std::to_string(i));
    }
  }
  for (const char* n : {"V", "V_d", "V_t", "V_s", "psi", "alpha_l", "alpha_r"}) {
    c.push_back(n);
  }
  for (const char* side : {"l", "r"}) {
    for (int i = 1; i <= 4; ++i) {
      for (const char* axis : {"x", "y"}) {
        c.push_back(std::string("fe_") + side + std::to_string(i) + axis);
      }
    }
  }
  for (const char* n :
       {"fe_norm", "relpose_trans_m", "relpose_rot_rad", "waypoint_index"}) {
    c.push_back(n);
  }
  return c;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os) {
  const std::vector<std::string> cols = trajectory_columns();
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const LogRow& r : log.rows) {
    std::string line = format_double(r.t);
    auto put = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    for (const JointVector* v : {&r.q_l, &r.q_r, &r.qd_l, &r.qd_r}) {
      for (int i = 0; i < kNumJoints; ++i) put((*v)[i]);
    }
    for (double v : {r.v.v, r.v.v_d, r.v.v_t, r.v.v_s, r.psi, r.alpha_l,
                     r.alpha_r}) {
      put(v);
    }
    for (int i = 0; i < 16; ++i) put(r.fe[i]);
    put(r.fe_norm);
    put(r.relpose_trans);
    put(r.relpose_rot);
    line += ',' + std::to_string(r.waypoint_index);
    os << line << '\n';
  }
}

json summary_to_json(const Summary& s) {
  json radii = json::array();
  for (double r : s.corner_radius_px) radii.push_back(r);
  return {{"success", s.success},
          {"duration_s", s.duration_s},
          {"max_fe_norm", s.max_fe_norm},
          {"mean_fe_norm", s.mean_fe_norm},
          {"corner_radius_px", radii},
          {"max_relpose_trans_m", s.max_relpose_trans_m},
          {"max_relpose_rot_rad", s.max_relpose_rot_rad},
          {"failure_reason", s.failure_reason}};
}

}  // namespace dualarm
