#pragma once

#include <array>

#include "rlbench/core/env.hpp"

namespace rlbench {

struct CartPoleParams {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_length = 1.0;  // full length; dynamics use the half-length
  double gravity = 9.81;
  double force_limit = 10.0;
  double inner_dt = 0.01;
  int frame_skip = 5;  // 0.05 s control interval
  double reset_noise = 0.01;
};

// Pole on a cart, observation (x, theta, xdot, thetadot) with theta measured
// from upright. Two variants share the dynamics:
//   balance:  start upright, r = 10 - (1 - cos th) - 1e-5*|a|^2,
//             ends when |x| > 2.4 or |th| > 0.2
//   swing-up: start hanging (th = pi), r = cos th,
//             ends when |x| > 3 with an extra -100 on that step
class CartPole : public Env {
 public:
  enum class Mode { kBalance, kSwingUp };

  explicit CartPole(Mode mode, CartPoleParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override;
  double param(const std::string& name) const override;
  void set_param(const std::string& name, double value) override;

  // state = (x, theta, xdot, thetadot); exposed for tests
  const std::array<double, 4>& state() const { return state_; }
  void set_state(const std::array<double, 4>& s) { state_ = s; }
  double energy() const;  // kinetic + potential, for integrator checks

 private:
  std::array<double, 4> deriv(const std::array<double, 4>& s, double force) const;
  Eigen::VectorXd observe() const;

  Mode mode_;
  CartPoleParams p_;
  EnvSpec spec_;
  std::array<double, 4> state_{};
};

}  // namespace rlbench
