#pragma once

#include <array>

#include "rlbench/core/env.hpp"

namespace rlbench {

struct AcrobotParams {
  double mass1 = 1.0;
  double mass2 = 1.0;
  double length1 = 1.0;
  double length2 = 1.0;
  double com1 = 0.5;  // distance joint -> link COM
  double com2 = 0.5;
  double inertia1 = 1.0;  // about the COM
  double inertia2 = 1.0;
  double gravity = 9.81;
  double torque_limit = 1.0;
  double inner_dt = 0.01;
  int frame_skip = 2;  // 0.02 s control interval
  double reset_noise = 0.01;
};

// Two-link underactuated pendulum; torque acts at the second joint only.
// theta1 is measured from hanging-down, theta2 is the relative joint angle.
// Observation (theta1, theta2, theta1dot, theta2dot) with angles wrapped to
// [-pi, pi). r = -|tip - target| where the target is the fully extended
// upright tip; no termination condition.
class Acrobot : public Env {
 public:
  explicit Acrobot(AcrobotParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override;
  double param(const std::string& name) const override;
  void set_param(const std::string& name, double value) override;

  const std::array<double, 4>& state() const { return state_; }
  void set_state(const std::array<double, 4>& s) { state_ = s; }
  // Cartesian tip position (x, y) with the base joint at the origin
  std::array<double, 2> tip() const;
  double energy() const;

 private:
  std::array<double, 4> deriv(const std::array<double, 4>& s, double torque) const;

  AcrobotParams p_;
  EnvSpec spec_;
  std::array<double, 4> state_{};  // (theta1, theta2, theta1dot, theta2dot)
};

}  // namespace rlbench
