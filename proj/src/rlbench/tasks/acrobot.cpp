#include "rlbench/tasks/acrobot.hpp"

#include <cmath>
#include <stdexcept>

#include "rlbench/tasks/integrate.hpp"

namespace rlbench {

Acrobot::Acrobot(AcrobotParams params) : p_(params) {
  spec_.observation_dim = 4;
  spec_.action_dim = 1;
  spec_.action_lower = Eigen::VectorXd::Constant(1, -p_.torque_limit);
  spec_.action_upper = Eigen::VectorXd::Constant(1, p_.torque_limit);
  spec_.positional_indices = {0, 1};
  spec_.validate();
}

// Manipulator form M(q) qdd + c(q, qd) + g(q) = (0, tau); the 2x2 system is
// solved in closed form each derivative evaluation.
std::array<double, 4> Acrobot::deriv(const std::array<double, 4>& s,
                                     double torque) const {
  const double th1 = s[0], th2 = s[1], d1 = s[2], d2 = s[3];
  const double m1 = p_.mass1, m2 = p_.mass2;
  const double l1 = p_.length1, lc1 = p_.com1, lc2 = p_.com2;
  const double g = p_.gravity;
  const double c2 = std::cos(th2), s2 = std::sin(th2);

  const double m11 = m1 * lc1 * lc1 +
                     m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) +
                     p_.inertia1 + p_.inertia2;
  const double m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + p_.inertia2;
  const double m22 = m2 * lc2 * lc2 + p_.inertia2;

  const double cor1 = -m2 * l1 * lc2 * s2 * (2.0 * d1 * d2 + d2 * d2);
  const double cor2 = m2 * l1 * lc2 * s2 * d1 * d1;
  const double grav1 = (m1 * lc1 + m2 * l1) * g * std::sin(th1) +
                       m2 * lc2 * g * std::sin(th1 + th2);
  const double grav2 = m2 * lc2 * g * std::sin(th1 + th2);

  const double rhs1 = -cor1 - grav1;
  const double rhs2 = torque - cor2 - grav2;
  const double det = m11 * m22 - m12 * m12;
  const double a1 = (m22 * rhs1 - m12 * rhs2) / det;
  const double a2 = (m11 * rhs2 - m12 * rhs1) / det;
  return {d1, d2, a1, a2};
}

std::array<double, 2> Acrobot::tip() const {
  const double th1 = state_[0], th12 = state_[0] + state_[1];
  return {p_.length1 * std::sin(th1) + p_.length2 * std::sin(th12),
          -p_.length1 * std::cos(th1) - p_.length2 * std::cos(th12)};
}

Eigen::VectorXd Acrobot::reset(Rng& rng) {
  for (auto& v : state_) v = rng.uniform(-p_.reset_noise, p_.reset_noise);
  Eigen::VectorXd obs(4);
  obs << wrap_angle(state_[0]), wrap_angle(state_[1]), state_[2], state_[3];
  return obs;
}

StepResult Acrobot::step(const Eigen::VectorXd& action) {
  if (action.size() != 1 || !std::isfinite(action[0]))
    throw std::invalid_argument("Acrobot: action must be a finite scalar");
  const double torque = std::clamp(action[0], -p_.torque_limit, p_.torque_limit);

  for (int i = 0; i < p_.frame_skip; ++i)
    state_ = rk4_step(state_, p_.inner_dt,
                      [&](const std::array<double, 4>& s) { return deriv(s, torque); });

  StepResult out;
  out.observation = Eigen::VectorXd(4);
  out.observation << wrap_angle(state_[0]), wrap_angle(state_[1]), state_[2],
      state_[3];
  const auto t = tip();
  const double ty = p_.length1 + p_.length2;
  out.reward = -std::sqrt(t[0] * t[0] + (t[1] - ty) * (t[1] - ty));
  out.terminated = false;
  return out;
}

std::unique_ptr<Env> Acrobot::clone() const {
  return std::make_unique<Acrobot>(*this);
}

double Acrobot::energy() const {
  const double th1 = state_[0], th2 = state_[1], d1 = state_[2], d2 = state_[3];
  const double m1 = p_.mass1, m2 = p_.mass2;
  const double l1 = p_.length1, lc1 = p_.com1, lc2 = p_.com2;
  const double c2 = std::cos(th2);

  const double m11 = m1 * lc1 * lc1 +
                     m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) +
                     p_.inertia1 + p_.inertia2;
  const double m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + p_.inertia2;
  const double m22 = m2 * lc2 * lc2 + p_.inertia2;
  const double kinetic =
      0.5 * (m11 * d1 * d1 + 2.0 * m12 * d1 * d2 + m22 * d2 * d2);
  const double potential = -(m1 * lc1 + m2 * l1) * p_.gravity * std::cos(th1) -
                           m2 * lc2 * p_.gravity * std::cos(th1 + th2);
  return kinetic + potential;
}

std::vector<std::string> Acrobot::param_names() const {
  return {"mass1",   "mass2",   "length1",  "length2",     "com1",
          "com2",    "inertia1", "inertia2", "gravity",    "torque_limit",
          "inner_dt", "frame_skip", "reset_noise"};
}

double Acrobot::param(const std::string& name) const {
  if (name == "mass1") return p_.mass1;
  if (name == "mass2") return p_.mass2;
  if (name == "length1") return p_.length1;
  if (name == "length2") return p_.length2;
  if (name == "com1") return p_.com1;
  if (name == "com2") return p_.com2;
  if (name == "inertia1") return p_.inertia1;
  if (name == "inertia2") return p_.inertia2;
  if (name == "gravity") return p_.gravity;
  if (name == "torque_limit") return p_.torque_limit;
  if (name == "inner_dt") return p_.inner_dt;
  if (name == "frame_skip") return p_.frame_skip;
  if (name == "reset_noise") return p_.reset_noise;
  return Env::param(name);
}

void Acrobot::set_param(const std::string& name, double value) {
  if (name == "mass1") p_.mass1 = value;
  else if (name == "mass2") p_.mass2 = value;
  else if (name == "length1") {
    // COM distance tracks the link length; inertia is an independent param
    p_.com1 *= value / p_.length1;
    p_.length1 = value;
  } else if (name == "length2") {
    p_.com2 *= value / p_.length2;
    p_.length2 = value;
  } else if (name == "com1") p_.com1 = value;
  else if (name == "com2") p_.com2 = value;
  else if (name == "inertia1") p_.inertia1 = value;
  else if (name == "inertia2") p_.inertia2 = value;
  else if (name == "gravity") p_.gravity = value;
  else if (name == "torque_limit") {
    p_.torque_limit = value;
    spec_.action_lower[0] = -value;
    spec_.action_upper[0] = value;
  } else if (name == "inner_dt") p_.inner_dt = value;
  else if (name == "frame_skip") p_.frame_skip = static_cast<int>(value);
  else if (name == "reset_noise") p_.reset_noise = value;
  else Env::set_param(name, value);
}

}  // namespace rlbench
