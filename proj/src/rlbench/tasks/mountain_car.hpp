#pragma once

#include <array>

#include "rlbench/core/env.hpp"

namespace rlbench {

struct MountainCarParams {
  double car_mass = 1.0;
  double gravity = 9.81;
  // tangential force limit; must be small enough that a single full-throttle
  // climb from the valley bottom cannot reach the target height
  double force_limit = 3.0;
  double height_amp = 0.45;   // valley profile amplitude
  double curve_freq = 3.0;    // valley profile frequency
  double valley_width = 1.0;  // horizontal scale; randomized by the SI variant
  double target_height = 0.6;
  double inner_dt = 0.01;
  int frame_skip = 5;  // 0.05 s control interval
  double reset_noise = 0.01;
};

// Car in a valley, observation (x, xdot). The car is a bead on the curve
// y = H(x) = amp * (1 - cos(k*x/w)) driven by a bounded tangential force;
// escaping requires building momentum across the two slopes.
// r = -1 + H(x); the episode ends when H(x) >= target height.
class MountainCar : public Env {
 public:
  explicit MountainCar(MountainCarParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override;
  double param(const std::string& name) const override;
  void set_param(const std::string& name, double value) override;

  double height(double x) const;
  const std::array<double, 2>& state() const { return state_; }
  void set_state(const std::array<double, 2>& s) { state_ = s; }
  double energy() const;

 private:
  std::array<double, 2> deriv(const std::array<double, 2>& s, double force) const;

  MountainCarParams p_;
  EnvSpec spec_;
  std::array<double, 2> state_{};  // (x, xdot)
};

}  // namespace rlbench
