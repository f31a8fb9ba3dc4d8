#include "rlbench/tasks/cartpole.hpp"

#include <cmath>
#include <stdexcept>

#include "rlbench/tasks/integrate.hpp"

namespace rlbench {

CartPole::CartPole(Mode mode, CartPoleParams params) : mode_(mode), p_(params) {
  spec_.observation_dim = 4;
  spec_.action_dim = 1;
  spec_.action_lower = Eigen::VectorXd::Constant(1, -p_.force_limit);
  spec_.action_upper = Eigen::VectorXd::Constant(1, p_.force_limit);
  spec_.positional_indices = {0, 1};
  spec_.validate();
}

std::array<double, 4> CartPole::deriv(const std::array<double, 4>& s,
                                      double force) const {
  const double th = s[1], thd = s[3];
  const double m = p_.pole_mass, mc = p_.cart_mass, g = p_.gravity;
  const double l = 0.5 * p_.pole_length;  // distance pivot -> pole COM
  const double total = m + mc;
  const double sin_th = std::sin(th), cos_th = std::cos(th);

  const double temp = (force + m * l * thd * thd * sin_th) / total;
  const double th_acc = (g * sin_th - cos_th * temp) /
                        (l * (4.0 / 3.0 - m * cos_th * cos_th / total));
  const double x_acc = temp - m * l * th_acc * cos_th / total;
  return {s[2], s[3], x_acc, th_acc};
}

Eigen::VectorXd CartPole::observe() const {
  Eigen::VectorXd obs(4);
  obs << state_[0],
      mode_ == Mode::kSwingUp ? wrap_angle(state_[1]) : state_[1], state_[2],
      state_[3];
  return obs;
}

Eigen::VectorXd CartPole::reset(Rng& rng) {
  const double base_th = mode_ == Mode::kSwingUp ? M_PI : 0.0;
  for (auto& v : state_) v = rng.uniform(-p_.reset_noise, p_.reset_noise);
  state_[1] += base_th;
  return observe();
}

StepResult CartPole::step(const Eigen::VectorXd& action) {
  if (action.size() != 1 || !std::isfinite(action[0]))
    throw std::invalid_argument("CartPole: action must be a finite scalar");
  const double force =
      std::clamp(action[0], -p_.force_limit, p_.force_limit);

  for (int i = 0; i < p_.frame_skip; ++i)
    state_ = rk4_step(state_, p_.inner_dt,
                      [&](const std::array<double, 4>& s) { return deriv(s, force); });

  StepResult out;
  out.observation = observe();
  const double x = state_[0], th = state_[1];
  if (mode_ == Mode::kBalance) {
    out.reward = 10.0 - (1.0 - std::cos(th)) - 1e-5 * force * force;
    out.terminated = std::abs(x) > 2.4 || std::abs(th) > 0.2;
  } else {
    out.reward = std::cos(th);
    out.terminated = std::abs(x) > 3.0;
    if (out.terminated) out.reward -= 100.0;
  }
  return out;
}

std::unique_ptr<Env> CartPole::clone() const {
  return std::make_unique<CartPole>(*this);
}

double CartPole::energy() const {
  const double th = state_[1], xd = state_[2], thd = state_[3];
  const double m = p_.pole_mass, l = 0.5 * p_.pole_length;
  // the 4/3 factor in the dynamics corresponds to I = m*l^2/3 about the pivot
  const double kinetic = 0.5 * p_.cart_mass * xd * xd +
                         0.5 * m * (xd * xd + 2.0 * l * xd * thd * std::cos(th)) +
                         0.5 * (4.0 / 3.0) * m * l * l * thd * thd;
  const double potential = m * p_.gravity * l * std::cos(th);
  return kinetic + potential;
}

std::vector<std::string> CartPole::param_names() const {
  return {"cart_mass", "pole_mass",   "pole_length", "gravity",
          "force_limit", "inner_dt",  "frame_skip",  "reset_noise"};
}

double CartPole::param(const std::string& name) const {
  if (name == "cart_mass") return p_.cart_mass;
  if (name == "pole_mass") return p_.pole_mass;
  if (name == "pole_length") return p_.pole_length;
  if (name == "gravity") return p_.gravity;
  if (name == "force_limit") return p_.force_limit;
  if (name == "inner_dt") return p_.inner_dt;
  if (name == "frame_skip") return p_.frame_skip;
  if (name == "reset_noise") return p_.reset_noise;
  return Env::param(name);
}

void CartPole::set_param(const std::string& name, double value) {
  if (name == "cart_mass") p_.cart_mass = value;
  else if (name == "pole_mass") p_.pole_mass = value;
  else if (name == "pole_length") p_.pole_length = value;
  else if (name == "gravity") p_.gravity = value;
  else if (name == "force_limit") {
    p_.force_limit = value;
    spec_.action_lower[0] = -value;
    spec_.action_upper[0] = value;
  } else if (name == "inner_dt") p_.inner_dt = value;
  else if (name == "frame_skip") p_.frame_skip = static_cast<int>(value);
  else if (name == "reset_noise") p_.reset_noise = value;
  else Env::set_param(name, value);
}

}  // namespace rlbench
