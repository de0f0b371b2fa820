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

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "dualarm/simulator.hpp"

namespace dualarm {

// Canonical document: every field is written, SI units throughout.
nlohmann::json scenario_to_json(const Scenario& scenario);

// Missing keys keep their defaults; unknown keys and malformed values raise
// ScenarioError naming the dotted key.
Scenario scenario_from_json(const nlohmann::json& doc);

// Applies "a.b.c=value" to a canonical document. The value is parsed as JSON
// when possible and as a string otherwise. The key must already exist.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Reads, canonicalizes, applies overrides, validates.
Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides = {});

std::vector<std::string> trajectory_columns();
// Shortest round-trip formatting for every value.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os);
std::string format_double(double v);

nlohmann::json summary_to_json(const Summary& summary);

}  // namespace dualarm
