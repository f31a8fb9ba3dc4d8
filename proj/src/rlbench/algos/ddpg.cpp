#include "rlbench/algos/ddpg.hpp"

#include <stdexcept>

namespace rlbench {

ReplayPool::ReplayPool(int capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("ReplayPool: capacity < 1");
  storage_.resize(capacity_);
}

void ReplayPool::add(Transition t) {
  storage_[cursor_] = std::move(t);
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

std::vector<int> ReplayPool::sample_indices(int batch, Rng& rng) const {
  if (size_ == 0) throw std::logic_error("ReplayPool: sampling from empty pool");
  std::vector<int> idx(batch);
  for (int i = 0; i < batch; ++i)
    idx[i] = static_cast<int>(rng.uniform_index(size_));
  return idx;
}

void soft_update(Eigen::VectorXd& target, const Eigen::VectorXd& live, double tau) {
  if (target.size() != live.size())
    throw std::invalid_argument("soft_update: shape mismatch");
  target = tau * live + (1.0 - tau) * target;
}

Ddpg::Ddpg(const EnvSpec& spec, DdpgConfig config, Rng& init_rng)
    : cfg_(config),
      spec_(spec),
      pool_(config.replay_capacity),
      actor_(spec.observation_dim, spec.action_lower, spec.action_upper,
             config.hidden, init_rng),
      critic_(spec.observation_dim, spec.action_dim, config.hidden, init_rng),
      target_actor_(actor_.params()),
      target_critic_(critic_.params()),
      actor_opt_(config.actor_lr),
      critic_opt_(config.critic_lr, config.critic_weight_decay),
      noise_(spec.action_dim, config.ou_rate, config.ou_sigma) {}

double Ddpg::critic_loss(const std::vector<int>& batch_indices,
                         Eigen::VectorXd* grad) const {
  const int b = static_cast<int>(batch_indices.size());
  Eigen::MatrixXd obs(b, spec_.observation_dim), act(b, spec_.action_dim);
  Eigen::MatrixXd next_obs(b, spec_.observation_dim);
  Eigen::VectorXd rewards(b);
  Eigen::VectorXd terminal(b);
  for (int i = 0; i < b; ++i) {
    const auto& t = pool_.at(batch_indices[i]);
    obs.row(i) = t.obs.transpose();
    act.row(i) = t.action.transpose();
    next_obs.row(i) = t.next_obs.transpose();
    rewards[i] = t.reward;
    terminal[i] = t.terminal ? 1.0 : 0.0;
  }

  // regression target from the target networks; terminal transitions do not
  // bootstrap
  DeterministicMlpPolicy target_actor = actor_;
  target_actor.params() = target_actor_;
  QFunction target_critic = critic_;
  target_critic.params() = target_critic_;
  const Eigen::MatrixXd next_act = target_actor.actions(next_obs, nullptr);
  const Eigen::VectorXd next_q = target_critic.values(next_obs, next_act, nullptr);
  const Eigen::VectorXd y =
      rewards.array() +
      cfg_.discount * (1.0 - terminal.array()) * next_q.array();

  Mlp::Trace trace;
  const Eigen::VectorXd q = critic_.values(obs, act, &trace);
  const Eigen::VectorXd err = q - y;
  const double loss = err.squaredNorm() / b;
  if (grad) {
    grad->setZero();
    critic_.backward(trace, 2.0 * err / b, *grad);
  }
  return loss;
}

double Ddpg::critic_update(const std::vector<int>& batch_indices) {
  Eigen::VectorXd grad(critic_.num_params());
  const double loss = critic_loss(batch_indices, &grad);
  critic_opt_.step(critic_.params(), grad);
  return loss;
}

Eigen::VectorXd Ddpg::actor_gradient(const std::vector<int>& batch_indices) const {
  const int b = static_cast<int>(batch_indices.size());
  Eigen::MatrixXd obs(b, spec_.observation_dim);
  for (int i = 0; i < b; ++i)
    obs.row(i) = pool_.at(batch_indices[i]).obs.transpose();

  DeterministicMlpPolicy::Trace actor_trace;
  const Eigen::MatrixXd actions = actor_.actions(obs, &actor_trace);

  Mlp::Trace critic_trace;
  critic_.values(obs, actions, &critic_trace);
  Eigen::VectorXd unused = Eigen::VectorXd::Zero(critic_.num_params());
  Eigen::MatrixXd dq_da;
  critic_.backward(critic_trace, Eigen::VectorXd::Constant(b, 1.0 / b), unused,
                   &dq_da);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(actor_.num_params());
  actor_.backward(actor_trace, dq_da, grad);
  return grad;
}

void Ddpg::actor_update(const std::vector<int>& batch_indices) {
  // ascent on the mean critic value
  const Eigen::VectorXd grad = actor_gradient(batch_indices);
  actor_opt_.step(actor_.params(), Eigen::VectorXd(-grad));
}

void Ddpg::soft_update_targets() {
  soft_update(target_actor_, actor_.params(), cfg_.tau);
  soft_update(target_critic_, critic_.params(), cfg_.tau);
}

void Ddpg::sync_targets() {
  target_actor_ = actor_.params();
  target_critic_ = critic_.params();
}

Ddpg::IterationResult Ddpg::run_iteration(Env& env, int step_budget, int horizon,
                                          Rng& explore_rng) {
  IterationResult result;
  for (int s = 0; s < step_budget; ++s) {
    if (!episode_open_) {
      current_obs_ = env.reset(explore_rng);
      noise_.reset();
      episode_reward_ = 0.0;
      episode_steps_ = 0;
      episode_open_ = true;
    }

    Eigen::VectorXd action = actor_.action(current_obs_);
    // exploration noise scaled to the action range, clipped to the bounds
    action += actor_.half_range().cwiseProduct(noise_.sample(explore_rng));
    action = action.cwiseMax(spec_.action_lower).cwiseMin(spec_.action_upper);

    const StepResult sr = env.step(action);
    episode_reward_ += sr.reward;
    ++episode_steps_;
    ++total_steps_;
    ++result.steps;

    ReplayPool::Transition t;
    t.obs = current_obs_;
    t.action = action;
    t.reward = scale_reward(sr.reward);
    t.next_obs = sr.observation;
    t.terminal = sr.terminated;  // horizon cutoff is not an absorbing state
    pool_.add(std::move(t));
    current_obs_ = sr.observation;

    if (sr.terminated || episode_steps_ >= horizon) {
      result.episode_returns.push_back(episode_reward_);
      episode_open_ = false;
    }

    if (total_steps_ > cfg_.warmup_steps && pool_.size() >= cfg_.batch_size) {
      const auto batch = pool_.sample_indices(cfg_.batch_size, explore_rng);
      critic_update(batch);
      actor_update(batch);
      soft_update_targets();
    }
  }
  return result;
}

}  // namespace rlbench
