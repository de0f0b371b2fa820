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

#include "dualarm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "dualarm/constraints.hpp"
#include "dualarm/defaults.hpp"
#include "dualarm/objectives.hpp"

namespace dualarm {
namespace {

constexpr double kStep = 1e-6;

double rel_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).lpNorm<Eigen::Infinity>() /
         std::max(want.lpNorm<Eigen::Infinity>(), 1e-12);
}

Eigen::VectorXd joint_fd(const std::function<double(const JointPair&)>& f,
                         const JointPair& q) {
  Eigen::VectorXd g(2 * kNumJoints);
  for (int i = 0; i < 2 * kNumJoints; ++i) {
    JointPair hi = q, lo = q;
    JointVector& vh = i < kNumJoints ? hi.left : hi.right;
    JointVector& vl = i < kNumJoints ? lo.left : lo.right;
    vh[i % kNumJoints] += kStep;
    vl[i % kNumJoints] -= kStep;
    g[i] = (f(hi) - f(lo)) / (2.0 * kStep);
  }
  return g;
}

Eigen::VectorXd stack(const JointPair& g) {
  Eigen::VectorXd v(2 * kNumJoints);
  v << g.left, g.right;
  return v;
}

Transform displaced(const Transform& t, const Vec6& v, double h) {
  return {Rotation::Exp(v.tail<3>() * h) * t.rotation,
          t.position + v.head<3>() * h};
}

struct Fixture {
  Scenario sc = default_scenario(1);
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> u{-1.0, 1.0};

  explicit Fixture(std::uint64_t seed) : rng(seed) {}

  JointVector jitter(double scale) {
    JointVector d;
    for (int i = 0; i < kNumJoints; ++i) d[i] = scale * u(rng);
    return d;
  }

  DualPose pose(const JointPair& q) const {
    return {forward_kinematics(sc.arm_l, q.left),
            forward_kinematics(sc.arm_r, q.right)};
  }

  // Grasp at q0, random desired object, random current joints nearby.
  ReferenceState refs() {
    const JointPair q0{sc.q0_l, sc.q0_r};
    const DualPose p0 = pose(q0);
    const FeatureSet s0 = feature_set(p0, sc.rig_l, sc.rig_r);
    const ReferenceState base(p0, p0.left * sc.object_in_left, s0);
    Waypoint w;
    w.position = Vec3(u(rng), u(rng), u(rng)) * 0.1;
    w.rpy = Vec3(u(rng), u(rng), u(rng)) * 0.2;
    return base.with_desired_object(waypoint_pose(w, base.initial_object()));
  }
};

class Tracker {
 public:
  Tracker(std::string name, double tol) : r_{std::move(name), 0.0, tol, true} {}
  void add(double e) {
    r_.max_error = std::max(r_.max_error, e);
    if (!(e <= r_.tolerance)) r_.passed = false;
  }
  CheckResult result() const { return r_; }

 private:
  CheckResult r_;
};

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& options) {
  Fixture fx(options.seed);
  const Scenario& sc = fx.sc;
  Tracker jac("jacobian_fd", 1e-5), gd("grad_Vd_fd", 1e-5),
      gt("grad_Vt_fd", 1e-5), gs("grad_Vs_fd", 1e-4),
      lfd("interaction_fd", 1e-4), lnull("interaction_null_space", 1e-10),
      descent("descent_identity", 1e-10), scaling("input_scaling", 0.0),
      pen("penalty_fd", 1e-6), lim("joint_limit_fd", 1e-5);

  for (int trial = 0; trial < options.trials; ++trial) {
    const ReferenceState refs = fx.refs();
    const JointPair q{sc.q0_l + fx.jitter(0.15), sc.q0_r + fx.jitter(0.15)};
    const DualPose p = fx.pose(q);
    const JacobianPair jp{geometric_jacobian(sc.arm_l, q.left),
                          geometric_jacobian(sc.arm_r, q.right)};
    const FeatureSet f = feature_set(p, sc.rig_l, sc.rig_r);

    // Jacobian against FK differences along a random joint direction.
    {
      const JointVector dq = fx.jitter(1.0);
      const Transform a = forward_kinematics(sc.arm_l, q.left + kStep * dq);
      const Transform b = forward_kinematics(sc.arm_l, q.left - kStep * dq);
      Vec6 fd;
      fd.head<3>() = (a.position - b.position) / (2.0 * kStep);
      const Mat3 rdot =
          (a.rotation.matrix() - b.rotation.matrix()) / (2.0 * kStep);
      fd.tail<3>() = sk_vee(rdot * p.left.rotation.matrix().transpose());
      jac.add(rel_error(jp.left * dq, fd));
    }

    auto vd = [&](const JointPair& x) { return value_Vd(fx.pose(x), refs); };
    auto vt = [&](const JointPair& x) { return value_Vt(fx.pose(x), refs); };
    auto vs = [&](const JointPair& x) {
      return value_Vs(feature_set(fx.pose(x), sc.rig_l, sc.rig_r), refs);
    };
    const JointPair g_d = grad_Vd(p, refs, jp);
    const JointPair g_t = grad_Vt(p, refs, jp);
    const JointPair g_s = grad_Vs(p, sc.rig_l, sc.rig_r, f, refs, jp);
    gd.add(rel_error(stack(g_d), joint_fd(vd, q)));
    gt.add(rel_error(stack(g_t), joint_fd(vt, q)));
    gs.add(rel_error(stack(g_s), joint_fd(vs, q)));

    // Interaction blocks against feature differences under twists.
    InteractionBlocks blocks = interaction_blocks(p, sc.rig_l, sc.rig_r, f);
    if (options.corrupt_interaction_sign) {
      for (auto& b : blocks.left_to_left) b = -b;
    }
    Eigen::Matrix<double, 16, 12> l_fd, l_an;
    l_an << blocks.wrt_left(), blocks.wrt_right();
    for (int c = 0; c < 12; ++c) {
      Vec6 v = Vec6::Zero();
      v[c % 6] = 1.0;
      DualPose hi = p, lo = p;
      Transform& th = c < 6 ? hi.left : hi.right;
      Transform& tl = c < 6 ? lo.left : lo.right;
      th = displaced(th, v, kStep);
      tl = displaced(tl, v, -kStep);
      l_fd.col(c) = (feature_set(hi, sc.rig_l, sc.rig_r).stacked() -
                     feature_set(lo, sc.rig_l, sc.rig_r).stacked()) /
                    (2.0 * kStep);
    }
    lfd.add((l_an - l_fd).lpNorm<Eigen::Infinity>() /
            l_fd.lpNorm<Eigen::Infinity>());

    // Common rigid motion leaves every feature fixed.
    {
      const Vec3 v0 = Vec3(fx.u(fx.rng), fx.u(fx.rng), fx.u(fx.rng));
      const Vec3 w = Vec3(fx.u(fx.rng), fx.u(fx.rng), fx.u(fx.rng));
      const Twist tl{v0 + w.cross(p.left.position), w};
      const Twist tr{v0 + w.cross(p.right.position), w};
      lnull.add(feature_rate(blocks, tl, tr).lpNorm<Eigen::Infinity>());
    }

    // V̇ = ∇Vᵀq̇ = −‖q̇‖² for the unconstrained law.
    {
      Gains g;
      const double ws = g.w_s / (g.feature_scale * g.feature_scale);
      const JointPair qd =
          control_step({p, jp, f}, refs, sc.rig_l, sc.rig_r, g);
      const Eigen::VectorXd grad = g.w_d * stack(g_d) + g.w_t * stack(g_t) +
                                   ws * stack(g_s);
      const double n2 = stack(qd).squaredNorm();
      descent.add(std::abs(grad.dot(stack(qd)) + n2) / std::max(n2, 1e-300));
    }

    // Scaled commands respect limits and keep direction.
    for (int k = 0; k < 100; ++k) {
      const JointVector qd = fx.jitter(10.0);
      const JointVector lo = -(fx.jitter(1.0).cwiseAbs().array() + 0.01).matrix();
      const JointVector hi = (fx.jitter(1.0).cwiseAbs().array() + 0.01).matrix();
      const ScaledCommand s = scale_inputs(qd, lo, hi);
      double e = (s.qd - qd / s.alpha).lpNorm<Eigen::Infinity>();
      e += (s.qd - hi).cwiseMax(0.0).sum() + (lo - s.qd).cwiseMax(0.0).sum();
      if (s.alpha < 1.0) e += 1.0;
      scaling.add(e);
    }

    // Penalty derivative inside the active band.
    {
      const double h_bar = -0.05 - 0.5 * (fx.u(fx.rng) + 1.0);
      const double h = h_bar * (0.05 + 0.45 * (fx.u(fx.rng) + 1.0));
      const double fd =
          (penalty(h + kStep * std::abs(h), h_bar) -
           penalty(h - kStep * std::abs(h), h_bar)) /
          (2.0 * kStep * std::abs(h));
      pen.add(std::abs(penalty_derivative(h, h_bar) - fd) /
              std::max(std::abs(fd), 1e-12));
    }

    // Joint-limit smooth max near a boundary.
    {
      ArmModel al = sc.arm_l, ar = sc.arm_r;
      al.q_max = q.left + JointVector::Constant(0.05) + fx.jitter(0.03);
      al.q_min = q.left - JointVector::Constant(0.05) + fx.jitter(0.03);
      ar.q_max = q.right + JointVector::Constant(0.05) + fx.jitter(0.03);
      ar.q_min = q.right - JointVector::Constant(0.05) + fx.jitter(0.03);
      auto h = [&](const JointPair& x) {
        return joint_limit_constraint(x.left, x.right, al, ar, 0.02, 100.0).h;
      };
      const ConstraintEval ce =
          joint_limit_constraint(q.left, q.right, al, ar, 0.02, 100.0);
      lim.add(rel_error(stack({ce.grad_l, ce.grad_r}), joint_fd(h, q)));
    }
  }
  return {jac.result(),   gd.result(),      gt.result(),
          gs.result(),    lfd.result(),     lnull.result(),
          descent.result(), scaling.result(), pen.result(),
          lim.result()};
}

}  // namespace dualarm
