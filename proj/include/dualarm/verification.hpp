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
#include <string>
#include <vector>

namespace dualarm {

struct CheckOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  // Negates the left-camera/left-arm blocks before checking. Exists so the
  // interaction check can be seen to fail.
  bool corrupt_interaction_sign = false;
};

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Finite-difference and property checks over random states of the default
// two-arm rig.
std::vector<CheckResult> run_checks(const CheckOptions& options);

}  // namespace dualarm
