#pragma once

#include <memory>
#include <vector>

#include "rlbench/core/env.hpp"
#include "rlbench/core/rng.hpp"
#include "rlbench/nn/adam.hpp"
#include "rlbench/nn/deterministic.hpp"

namespace rlbench {

// Ring buffer of transitions; insertion past capacity overwrites the oldest
// entries and sampling is uniform over the filled region only.
class ReplayPool {
 public:
  struct Transition {
    Eigen::VectorXd obs;
    Eigen::VectorXd action;
    double reward = 0.0;  // stored pre-scaled
    Eigen::VectorXd next_obs;
    bool terminal = false;
  };

  explicit ReplayPool(int capacity);
  void add(Transition t);
  int size() const { return size_; }
  int capacity() const { return capacity_; }
  const Transition& at(int i) const { return storage_[i]; }
  std::vector<int> sample_indices(int batch, Rng& rng) const;

 private:
  int capacity_;
  int size_ = 0;
  int cursor_ = 0;
  std::vector<Transition> storage_;
};

// target <- tau * live + (1 - tau) * target, coordinate-wise
void soft_update(Eigen::VectorXd& target, const Eigen::VectorXd& live, double tau);

// Mean-reverting exploration noise, one state per action coordinate, reset at
// episode boundaries: x += rate * (0 - x) + sigma * N(0, 1).
class OrnsteinUhlenbeckNoise {
 public:
  OrnsteinUhlenbeckNoise(int dim, double rate, double sigma)
      : rate_(rate), sigma_(sigma), state_(Eigen::VectorXd::Zero(dim)) {}
  void reset() { state_.setZero(); }
  const Eigen::VectorXd& sample(Rng& rng) {
    for (int i = 0; i < state_.size(); ++i)
      state_[i] += rate_ * (0.0 - state_[i]) + sigma_ * rng.normal();
    return state_;
  }

 private:
  double rate_, sigma_;
  Eigen::VectorXd state_;
};

struct DdpgConfig {
  int replay_capacity = 1000000;
  int batch_size = 64;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double critic_weight_decay = 1e-2;
  double tau = 1e-3;
  double ou_rate = 0.15;
  double ou_sigma = 0.2;
  int warmup_steps = 10000;
  double reward_scale = 0.1;
  double discount = 0.99;
  std::vector<int> hidden = {400, 300};
};

// Off-policy online learner: each environment step appends to the pool and,
// past warmup, runs one critic regression step on target-network Bellman
// values, one deterministic policy-gradient step, and one soft target update.
class Ddpg {
 public:
  Ddpg(const EnvSpec& spec, DdpgConfig config, Rng& init_rng);

  // rewards are stored scaled by reward_scale; metrics use raw rewards
  double scale_reward(double r) const { return cfg_.reward_scale * r; }

  // (1/B) sum (y_i - Q(s_i,a_i))^2 with y_i from the target networks; fills
  // the critic parameter gradient when grad is non-null
  double critic_loss(const std::vector<int>& batch_indices,
                     Eigen::VectorXd* grad) const;
  // gradient of (1/B) sum Q(s_i, mu_theta(s_i)) w.r.t. the actor parameters
  Eigen::VectorXd actor_gradient(const std::vector<int>& batch_indices) const;

  double critic_update(const std::vector<int>& batch_indices);
  void actor_update(const std::vector<int>& batch_indices);
  void soft_update_targets();
  void sync_targets();  // hard copy, used after out-of-band actor edits

  struct IterationResult {
    std::vector<double> episode_returns;  // unscaled, completed this window
    int steps = 0;
  };
  // advances the environment by step_budget steps with OU exploration,
  // training once per step after warmup; episodes may span windows
  IterationResult run_iteration(Env& env, int step_budget, int horizon,
                                Rng& explore_rng);

  ReplayPool& pool() { return pool_; }
  DeterministicMlpPolicy& actor() { return actor_; }
  QFunction& critic() { return critic_; }
  const Eigen::VectorXd& target_actor_params() const { return target_actor_; }
  const Eigen::VectorXd& target_critic_params() const { return target_critic_; }
  long total_steps() const { return total_steps_; }

 private:
  DdpgConfig cfg_;
  EnvSpec spec_;
  ReplayPool pool_;
  DeterministicMlpPolicy actor_;
  QFunction critic_;
  Eigen::VectorXd target_actor_, target_critic_;
  Adam actor_opt_, critic_opt_;
  OrnsteinUhlenbeckNoise noise_;

  // episode state persists across iteration windows
  bool episode_open_ = false;
  Eigen::VectorXd current_obs_;
  double episode_reward_ = 0.0;
  int episode_steps_ = 0;
  long total_steps_ = 0;
};

}  // namespace rlbench
