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

#include "dualarm/simulator.hpp"

namespace dualarm {

// (−30, −140, −85, 45, 75, 0) degrees, both arms.
JointVector default_initial_joints();

// UR3-like arm with the limits shipped in the example scenarios.
ArmModel default_arm(const Transform& base);

// Two UR3-like arms with bases at (0, ∓0.55, 0), yawed so that the flanges
// face each other at the initial joints. End-effector frames sit at the
// grasped object's center with world-aligned axes; each wrist carries a
// camera and a 0.05 m marker. `path` in {1, 2, 3} selects the waypoint set
// B → C → A; 0 gives a single hold-in-place waypoint.
Scenario default_scenario(int path);

}  // namespace dualarm
