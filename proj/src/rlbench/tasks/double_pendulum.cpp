#include "rlbench/tasks/double_pendulum.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rlbench/tasks/integrate.hpp"

namespace rlbench {

DoublePendulum::DoublePendulum(DoublePendulumParams params) : p_(params) {
  spec_.observation_dim = 8;
  spec_.action_dim = 1;
  spec_.action_lower = Eigen::VectorXd::Constant(1, -p_.force_limit);
  spec_.action_upper = Eigen::VectorXd::Constant(1, p_.force_limit);
  spec_.positional_indices = {0, 1, 2, 3, 4};
  spec_.validate();
}

// Lagrangian dynamics in q = (x, t1, t2) with uniform thin-rod links
// (COM at l/2, inertia m*l^2/12). M(q) qdd = rhs(q, qd, F), solved as a
// dense 3x3 system each derivative evaluation.
std::array<double, 6> DoublePendulum::deriv(const std::array<double, 6>& s,
                                            double force) const {
  const double t1 = s[1], t2 = s[2];
  const double xd = s[3], d1 = s[4], d2 = s[5];
  const double m0 = p_.cart_mass, m1 = p_.mass1, m2 = p_.mass2;
  const double l1 = p_.length1, l2 = p_.length2;
  const double lc1 = 0.5 * l1, lc2 = 0.5 * l2;
  const double i1 = m1 * l1 * l1 / 12.0, i2 = m2 * l2 * l2 / 12.0;
  const double g = p_.gravity;

  const double s1 = std::sin(t1), c1 = std::cos(t1);
  const double s2 = std::sin(t2), c2 = std::cos(t2);
  const double s12 = std::sin(t1 - t2), c12 = std::cos(t1 - t2);

  Eigen::Matrix3d mass;
  mass << m0 + m1 + m2, (m1 * lc1 + m2 * l1) * c1, m2 * lc2 * c2,
      (m1 * lc1 + m2 * l1) * c1, m1 * lc1 * lc1 + m2 * l1 * l1 + i1,
      m2 * l1 * lc2 * c12, m2 * lc2 * c2, m2 * l1 * lc2 * c12,
      m2 * lc2 * lc2 + i2;

  Eigen::Vector3d rhs;
  rhs << force + (m1 * lc1 + m2 * l1) * s1 * d1 * d1 + m2 * lc2 * s2 * d2 * d2,
      -m2 * l1 * lc2 * s12 * d2 * d2 + g * (m1 * lc1 + m2 * l1) * s1,
      m2 * l1 * lc2 * s12 * d1 * d1 + g * m2 * lc2 * s2;

  const Eigen::Vector3d acc = mass.ldlt().solve(rhs);
  return {xd, d1, d2, acc[0], acc[1], acc[2]};
}

std::array<double, 2> DoublePendulum::tip() const {
  return {state_[0] + p_.length1 * std::sin(state_[1]) +
              p_.length2 * std::sin(state_[2]),
          p_.length1 * std::cos(state_[1]) + p_.length2 * std::cos(state_[2])};
}

Eigen::VectorXd DoublePendulum::observe() const {
  Eigen::VectorXd obs(8);
  obs << state_[0], std::sin(state_[1]), std::cos(state_[1]),
      std::sin(state_[2]), std::cos(state_[2]), state_[3], state_[4], state_[5];
  return obs;
}

Eigen::VectorXd DoublePendulum::reset(Rng& rng) {
  for (auto& v : state_) v = rng.uniform(-p_.reset_noise, p_.reset_noise);
  return observe();
}

StepResult DoublePendulum::step(const Eigen::VectorXd& action) {
  if (action.size() != 1 || !std::isfinite(action[0]))
    throw std::invalid_argument("DoublePendulum: action must be a finite scalar");
  const double force = std::clamp(action[0], -p_.force_limit, p_.force_limit);

  for (int i = 0; i < p_.frame_skip; ++i)
    state_ = rk4_step(state_, p_.inner_dt,
                      [&](const std::array<double, 6>& s) { return deriv(s, force); });

  StepResult out;
  out.observation = observe();
  const auto t = tip();
  out.reward = 10.0 - 0.01 * t[0] * t[0] - (t[1] - 2.0) * (t[1] - 2.0) -
               1e-3 * state_[4] * state_[4] - 5e-3 * state_[5] * state_[5];
  out.terminated = t[1] <= 1.0;
  return out;
}

std::unique_ptr<Env> DoublePendulum::clone() const {
  return std::make_unique<DoublePendulum>(*this);
}

double DoublePendulum::energy() const {
  const double t1 = state_[1], t2 = state_[2];
  const double xd = state_[3], d1 = state_[4], d2 = state_[5];
  const double m0 = p_.cart_mass, m1 = p_.mass1, m2 = p_.mass2;
  const double l1 = p_.length1, l2 = p_.length2;
  const double lc1 = 0.5 * l1, lc2 = 0.5 * l2;
  const double i1 = m1 * l1 * l1 / 12.0, i2 = m2 * l2 * l2 / 12.0;

  const double kinetic =
      0.5 * (m0 + m1 + m2) * xd * xd +
      0.5 * (m1 * lc1 * lc1 + m2 * l1 * l1 + i1) * d1 * d1 +
      0.5 * (m2 * lc2 * lc2 + i2) * d2 * d2 +
      (m1 * lc1 + m2 * l1) * std::cos(t1) * xd * d1 +
      m2 * lc2 * std::cos(t2) * xd * d2 +
      m2 * l1 * lc2 * std::cos(t1 - t2) * d1 * d2;
  const double potential = p_.gravity * ((m1 * lc1 + m2 * l1) * std::cos(t1) +
                                         m2 * lc2 * std::cos(t2));
  return kinetic + potential;
}

std::vector<std::string> DoublePendulum::param_names() const {
  return {"cart_mass", "mass1",      "mass2",    "length1",    "length2",
          "gravity",   "force_limit", "inner_dt", "frame_skip", "reset_noise"};
}

double DoublePendulum::param(const std::string& name) const {
  if (name == "cart_mass") return p_.cart_mass;
  if (name == "mass1") return p_.mass1;
  if (name == "mass2") return p_.mass2;
  if (name == "length1") return p_.length1;
  if (name == "length2") return p_.length2;
  if (name == "gravity") return p_.gravity;
  if (name == "force_limit") return p_.force_limit;
  if (name == "inner_dt") return p_.inner_dt;
  if (name == "frame_skip") return p_.frame_skip;
  if (name == "reset_noise") return p_.reset_noise;
  return Env::param(name);
}

void DoublePendulum::set_param(const std::string& name, double value) {
  if (name == "cart_mass") p_.cart_mass = value;
  else if (name == "mass1") p_.mass1 = value;
  else if (name == "mass2") p_.mass2 = value;
  else if (name == "length1") p_.length1 = value;
  else if (name == "length2") p_.length2 = value;
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
