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

#include "dualarm/constraints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace dualarm {

void PenaltyConfig::validate() const {
  if (!(h_bar < 0.0)) {
    throw std::invalid_argument("PenaltyConfig: h_bar must be negative");
  }
  if (!(sharpness > 0.0)) {
    throw std::invalid_argument("PenaltyConfig: sharpness must be positive");
  }
  if (!(margin >= 0.0)) {
    throw std::invalid_argument("PenaltyConfig: margin must be nonnegative");
  }
}

ConstraintViolated::ConstraintViolated(double h)
    : std::runtime_error("state constraint violated: h = " +
                         std::to_string(h)),
      h_(h) {}

double penalty(double h, double h_bar) {
  if (!(h < 0.0)) throw ConstraintViolated(h);
  if (h <= h_bar) return 0.0;
  const double u = (h_bar - h) / h;
  // expm1 keeps e^u − 1 − u accurate near the seam.
  return std::expm1(u) - u;
}

double penalty_derivative(double h, double h_bar) {
  if (!(h < 0.0)) throw ConstraintViolated(h);
  if (h <= h_bar) return 0.0;
  const double u = (h_bar - h) / h;
  return std::expm1(u) * (-h_bar / (h * h));
}

PenaltyGradient penalty_gradient(const ConstraintEval& eval,
                                 const PenaltyConfig& cfg) {
  const double d = penalty_derivative(eval.h, cfg.h_bar);
  return {d * eval.grad_l, d * eval.grad_r};
}

ScaledCommand scale_inputs(const JointVector& qd, const JointVector& qd_min,
                           const JointVector& qd_max) {
  double alpha = 1.0;
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(qd_min[i] < 0.0 && qd_max[i] > 0.0)) {
      throw std::invalid_argument(
          "scale_inputs: velocity limits must bracket zero");
    }
    alpha = std::max({alpha, qd[i] / qd_max[i], qd[i] / qd_min[i]});
  }
  // Rounding in qd / (qd / max) can land one ulp past the bound; nudge α
  // instead of clamping so that the output stays exactly qd / α.
  while (alpha > 1.0 && ((qd / alpha).array() > qd_max.array() ||
                         (qd / alpha).array() < qd_min.array())
                            .any()) {
    alpha = std::nextafter(alpha, INFINITY);
  }
  return {qd / alpha, alpha};
}

ConstraintEval joint_limit_constraint(const JointVector& q_l,
                                      const JointVector& q_r,
                                      const ArmModel& arm_l,
                                      const ArmModel& arm_r, double margin,
                                      double sharpness) {
  constexpr int kTerms = 4 * kNumJoints;
  std::array<double, kTerms> g;
  for (int i = 0; i < kNumJoints; ++i) {
    g[4 * i + 0] = arm_l.q_min[i] + margin - q_l[i];
    g[4 * i + 1] = q_l[i] - arm_l.q_max[i] + margin;
    g[4 * i + 2] = arm_r.q_min[i] + margin - q_r[i];
    g[4 * i + 3] = q_r[i] - arm_r.q_max[i] + margin;
  }
  const double top = *std::max_element(g.begin(), g.end());
  std::array<double, kTerms> w;
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    w[k] = std::exp(sharpness * (g[k] - top));
    sum += w[k];
  }
  ConstraintEval e;
  e.h = top + std::log(sum) / sharpness;
  for (int i = 0; i < kNumJoints; ++i) {
    e.grad_l[i] = (w[4 * i + 1] - w[4 * i + 0]) / sum;
    e.grad_r[i] = (w[4 * i + 3] - w[4 * i + 2]) / sum;
  }
  return e;
}

}  // namespace dualarm
