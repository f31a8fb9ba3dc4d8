#pragma once

#include <array>

#include "rlbench/core/env.hpp"

namespace rlbench {

struct DoublePendulumParams {
  double cart_mass = 1.0;
  double mass1 = 0.1;
  double mass2 = 0.1;
  double length1 = 1.0;
  double length2 = 1.0;
  double gravity = 9.81;
  double force_limit = 10.0;
  double inner_dt = 0.01;
  int frame_skip = 2;  // 0.02 s control interval
  double reset_noise = 0.01;
};

// Two-link pole on a cart, starting upright. Link angles are absolute,
// measured from vertical-up. Observation encodes each angle as sine and
// cosine: (x, sin t1, cos t1, sin t2, cos t2, xdot, t1dot, t2dot).
// r = 10 - 0.01*x_tip^2 - (y_tip - 2)^2 - 1e-3*t1dot^2 - 5e-3*t2dot^2;
// the episode ends when y_tip <= 1.
class DoublePendulum : public Env {
 public:
  explicit DoublePendulum(DoublePendulumParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override;
  double param(const std::string& name) const override;
  void set_param(const std::string& name, double value) override;

  const std::array<double, 6>& state() const { return state_; }
  void set_state(const std::array<double, 6>& s) { state_ = s; }
  std::array<double, 2> tip() const;  // (x_tip, y_tip)
  double energy() const;

 private:
  std::array<double, 6> deriv(const std::array<double, 6>& s, double force) const;
  Eigen::VectorXd observe() const;

  DoublePendulumParams p_;
  EnvSpec spec_;
  std::array<double, 6> state_{};  // (x, t1, t2, xdot, t1dot, t2dot)
};

}  // namespace rlbench
