#include "rlbench/tasks/mountain_car.hpp"

#include <cmath>
#include <stdexcept>

#include "rlbench/tasks/integrate.hpp"

namespace rlbench {

MountainCar::MountainCar(MountainCarParams params) : p_(params) {
  spec_.observation_dim = 2;
  spec_.action_dim = 1;
  spec_.action_lower = Eigen::VectorXd::Constant(1, -p_.force_limit);
  spec_.action_upper = Eigen::VectorXd::Constant(1, p_.force_limit);
  spec_.positional_indices = {0};
  spec_.validate();
}

double MountainCar::height(double x) const {
  return p_.height_amp * (1.0 - std::cos(p_.curve_freq * x / p_.valley_width));
}

// Bead on y = H(x) with tangential drive:
//   m(1 + H'^2) x'' + m H' H'' x'^2 + m g H' = F sqrt(1 + H'^2)
std::array<double, 2> MountainCar::deriv(const std::array<double, 2>& s,
                                         double force) const {
  const double k = p_.curve_freq / p_.valley_width;
  const double h1 = p_.height_amp * k * std::sin(k * s[0]);
  const double h2 = p_.height_amp * k * k * std::cos(k * s[0]);
  const double slope_sq = 1.0 + h1 * h1;
  const double x_acc = (force * std::sqrt(slope_sq) / p_.car_mass -
                        h1 * h2 * s[1] * s[1] - p_.gravity * h1) /
                       slope_sq;
  return {s[1], x_acc};
}

Eigen::VectorXd MountainCar::reset(Rng& rng) {
  for (auto& v : state_) v = rng.uniform(-p_.reset_noise, p_.reset_noise);
  Eigen::VectorXd obs(2);
  obs << state_[0], state_[1];
  return obs;
}

StepResult MountainCar::step(const Eigen::VectorXd& action) {
  if (action.size() != 1 || !std::isfinite(action[0]))
    throw std::invalid_argument("MountainCar: action must be a finite scalar");
  const double force = std::clamp(action[0], -p_.force_limit, p_.force_limit);

  for (int i = 0; i < p_.frame_skip; ++i)
    state_ = rk4_step(state_, p_.inner_dt,
                      [&](const std::array<double, 2>& s) { return deriv(s, force); });

  StepResult out;
  out.observation = Eigen::VectorXd(2);
  out.observation << state_[0], state_[1];
  const double h = height(state_[0]);
  out.reward = -1.0 + h;
  out.terminated = h >= p_.target_height;
  return out;
}

std::unique_ptr<Env> MountainCar::clone() const {
  return std::make_unique<MountainCar>(*this);
}

double MountainCar::energy() const {
  const double k = p_.curve_freq / p_.valley_width;
  const double h1 = p_.height_amp * k * std::sin(k * state_[0]);
  const double kinetic =
      0.5 * p_.car_mass * (1.0 + h1 * h1) * state_[1] * state_[1];
  return kinetic + p_.car_mass * p_.gravity * height(state_[0]);
}

std::vector<std::string> MountainCar::param_names() const {
  return {"car_mass",    "gravity",       "force_limit", "height_amp",
          "curve_freq",  "valley_width",  "target_height", "inner_dt",
          "frame_skip",  "reset_noise"};
}

double MountainCar::param(const std::string& name) const {
  if (name == "car_mass") return p_.car_mass;
  if (name == "gravity") return p_.gravity;
  if (name == "force_limit") return p_.force_limit;
  if (name == "height_amp") return p_.height_amp;
  if (name == "curve_freq") return p_.curve_freq;
  if (name == "valley_width") return p_.valley_width;
  if (name == "target_height") return p_.target_height;
  if (name == "inner_dt") return p_.inner_dt;
  if (name == "frame_skip") return p_.frame_skip;
  if (name == "reset_noise") return p_.reset_noise;
  return Env::param(name);
}

void MountainCar::set_param(const std::string& name, double value) {
  if (name == "car_mass") p_.car_mass = value;
  else if (name == "gravity") p_.gravity = value;
  else if (name == "force_limit") {
    p_.force_limit = value;
    spec_.action_lower[0] = -value;
    spec_.action_upper[0] = value;
  } else if (name == "height_amp") p_.height_amp = value;
  else if (name == "curve_freq") p_.curve_freq = value;
  else if (name == "valley_width") p_.valley_width = value;
  else if (name == "target_height") p_.target_height = value;
  else if (name == "inner_dt") p_.inner_dt = value;
  else if (name == "frame_skip") p_.frame_skip = static_cast<int>(value);
  else if (name == "reset_noise") p_.reset_noise = value;
  else Env::set_param(name, value);
}

}  // namespace rlbench
