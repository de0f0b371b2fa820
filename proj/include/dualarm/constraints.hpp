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

#include <stdexcept>

#include "dualarm/arm.hpp"

namespace dualarm {

// A scalar state constraint h(q_l, q_r) ≤ 0 with its joint gradients.
struct ConstraintEval {
  double h = -1.0;
  JointVector grad_l = JointVector::Zero();
  JointVector grad_r = JointVector::Zero();
};

struct PenaltyConfig {
  double h_bar = -0.05;
  // Log-sum-exp sharpness of the joint-limit smooth max.
  double sharpness = 100.0;
  // Joint-limit inset (rad) at which h reaches zero.
  double margin = 0.02;

  void validate() const;
};

class ConstraintViolated : public std::runtime_error {
 public:
  explicit ConstraintViolated(double h);
  double h() const { return h_; }

 private:
  double h_;
};

// ψ(h) = e^u − u − 1, u = (h̄ − h)/h, on h̄ < h < 0; zero for h ≤ h̄.
// Throws ConstraintViolated for h ≥ 0.
double penalty(double h, double h_bar);
double penalty_derivative(double h, double h_bar);

struct PenaltyGradient {
  JointVector left = JointVector::Zero();
  JointVector right = JointVector::Zero();
};
PenaltyGradient penalty_gradient(const ConstraintEval& eval,
                                 const PenaltyConfig& cfg);

struct ScaledCommand {
  JointVector qd = JointVector::Zero();
  double alpha = 1.0;
};
ScaledCommand scale_inputs(const JointVector& qd, const JointVector& qd_min,
                           const JointVector& qd_max);

// Smooth max over the 24 one-sided joint-limit residuals of both arms.
ConstraintEval joint_limit_constraint(const JointVector& q_l,
                                      const JointVector& q_r,
                                      const ArmModel& arm_l,
                                      const ArmModel& arm_r, double margin,
                                      double sharpness);

}  // namespace dualarm
