#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlbench/core/rng.hpp"

namespace rlbench {

struct EnvSpec {
  int observation_dim = 0;
  int action_dim = 0;
  Eigen::VectorXd action_lower;
  Eigen::VectorXd action_upper;
  int horizon = 500;
  double discount = 0.99;
  // observation indices carrying positional information (angles, positions);
  // the limited-sensors wrapper keeps exactly these
  std::vector<int> positional_indices;

  void validate() const {
    if (observation_dim <= 0 || action_dim <= 0)
      throw std::invalid_argument("EnvSpec: dimensions must be positive");
    if (horizon < 1) throw std::invalid_argument("EnvSpec: horizon must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0))
      throw std::invalid_argument("EnvSpec: discount must be in (0, 1]");
    if (action_lower.size() != action_dim || action_upper.size() != action_dim)
      throw std::invalid_argument("EnvSpec: bound dimensions");
    for (int i = 0; i < action_dim; ++i)
      if (!(action_lower[i] < action_upper[i]))
        throw std::invalid_argument("EnvSpec: action_lower < action_upper required");
  }
};

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool terminated = false;
};

// Per-episode record: o_t, the sampled (pre-clip) action a_t, and r_t.
struct Trajectory {
  std::vector<Eigen::VectorXd> observations;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> rewards;
  Eigen::VectorXd final_observation;  // post-step observation after the last step
  bool terminated = false;

  int length() const { return static_cast<int>(rewards.size()); }

  double total_reward() const {
    double s = 0.0;
    for (double r : rewards) s += r;
    return s;
  }
};

// Environments are value-like: cloneable, no shared state between clones.
class Env {
 public:
  virtual ~Env() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  // named physics parameters, for config overrides and system identification
  virtual std::vector<std::string> param_names() const { return {}; }
  virtual double param(const std::string& name) const {
    throw std::invalid_argument("unknown parameter: " + name);
  }
  virtual void set_param(const std::string& name, double) {
    throw std::invalid_argument("unknown parameter: " + name);
  }
};

}  // namespace rlbench
