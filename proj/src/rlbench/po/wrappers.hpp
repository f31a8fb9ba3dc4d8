#pragma once

#include <deque>
#include <memory>
#include <vector>

#include "rlbench/core/env.hpp"
#include "rlbench/tasks/registry.hpp"

namespace rlbench {

// Projects observations onto a fixed index set (by default the base task's
// positional coordinates, dropping velocities). Rewards, dynamics, and
// termination pass through untouched.
class LimitedSensorsEnv : public Env {
 public:
  LimitedSensorsEnv(std::unique_ptr<Env> base, std::vector<int> kept_indices);
  // keeps the base task's positional indices
  explicit LimitedSensorsEnv(std::unique_ptr<Env> base);

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override { return base_->param_names(); }
  double param(const std::string& n) const override { return base_->param(n); }
  void set_param(const std::string& n, double v) override { base_->set_param(n, v); }

 private:
  void init();
  Eigen::VectorXd project(const Eigen::VectorXd& full) const;

  std::unique_ptr<Env> base_;
  std::vector<int> kept_;
  EnvSpec spec_;
};

// Adds N(0, sigma^2) sensor noise to every observation and delays actions by
// a fixed number of control steps: the action submitted at step t reaches the
// base dynamics at step t + delay, with zero actions filling the initial
// window. Noise never touches rewards or the underlying state.
class NoisyDelayedEnv : public Env {
 public:
  NoisyDelayedEnv(std::unique_ptr<Env> base, double noise_sigma,
                  int delay_frames);

  const EnvSpec& spec() const override { return base_->spec(); }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override { return base_->param_names(); }
  double param(const std::string& n) const override { return base_->param(n); }
  void set_param(const std::string& n, double v) override { base_->set_param(n, v); }

  // seed of the per-episode noise stream; lets tests regenerate the noise
  std::uint64_t noise_seed() const { return noise_seed_; }

 private:
  Eigen::VectorXd noisy(const Eigen::VectorXd& obs);

  std::unique_ptr<Env> base_;
  double sigma_;
  int delay_;
  std::deque<Eigen::VectorXd> pending_;
  std::uint64_t noise_seed_ = 0;
  std::unique_ptr<Rng> noise_rng_;
};

// Rescales named physics parameters by a fresh uniform factor each episode;
// the drawn parameters stay fixed for the whole episode and are never
// observable.
class SysIdEnv : public Env {
 public:
  SysIdEnv(std::unique_ptr<Env> base, std::vector<ParamRange> ranges);

  const EnvSpec& spec() const override { return base_->spec(); }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::unique_ptr<Env> clone() const override;

  std::vector<std::string> param_names() const override { return base_->param_names(); }
  double param(const std::string& n) const override { return base_->param(n); }
  void set_param(const std::string& n, double v) override;

  // factors drawn at the last reset, aligned with the configured ranges
  const std::vector<double>& last_factors() const { return last_factors_; }

 private:
  std::unique_ptr<Env> base_;
  std::vector<ParamRange> ranges_;
  std::vector<double> base_values_;
  std::vector<double> last_factors_;
};

}  // namespace rlbench
