#include "rlbench/algos/batch_algos.hpp"

#include <cmath>

#include "rlbench/algos/cg.hpp"

namespace rlbench {

NaturalStep natural_gradient_step(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fvp,
    const Eigen::VectorXd& gradient, double delta_kl, int cg_iters) {
  NaturalStep step;
  step.direction = conjugate_gradient(fvp, gradient, cg_iters);
  const double gd = gradient.dot(step.direction);
  if (!(gd > 0.0) || !std::isfinite(gd)) return step;  // valid stays false
  step.alpha = std::sqrt(delta_kl / gd);
  step.valid = true;
  return step;
}

Eigen::VectorXd policy_gradient(const BatchSample& batch,
                                const StochasticPolicy& policy) {
  if (batch.size() == 0) throw std::invalid_argument("policy_gradient: empty batch");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.num_params());
  policy.weighted_logprob_grad(batch.traj, batch.advantages / batch.size(), grad);
  return grad;
}

double surrogate_loss(const BatchSample& batch, const StochasticPolicy& policy,
                      const Eigen::VectorXd& logp_old) {
  const Eigen::VectorXd logp = policy.log_probs(batch.traj);
  return ((logp - logp_old).array().exp() * batch.advantages.array()).mean();
}

void weighted_ml_fit(StochasticPolicy& policy, const TrajBatch& traj,
                     const Eigen::VectorXd& weights, int steps, double lr) {
  const double mean_w = weights.mean();
  if (!(mean_w > 0.0)) return;
  const Eigen::VectorXd w = weights / (mean_w * traj.size());
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.num_params());
    policy.weighted_logprob_grad(traj, w, grad);
    policy.params() += lr * grad;
  }
}

UpdateStats Reinforce::update(const BatchSample& batch, StochasticPolicy& policy) {
  UpdateStats stats;
  if (batch.size() == 0) throw std::invalid_argument("reinforce: empty batch");
  const GaussianDist old_dist = policy.dist(batch.traj);
  const Eigen::VectorXd grad = policy_gradient(batch, policy);
  policy.params() += lr_ * grad;
  stats.updated = true;
  stats.mean_kl = policy.mean_kl_from(old_dist, batch.traj);
  stats.objective = grad.norm();
  return stats;
}

UpdateStats Tnpg::update(const BatchSample& batch, StochasticPolicy& policy) {
  UpdateStats stats;
  const GaussianDist old_dist = policy.dist(batch.traj);
  const Eigen::VectorXd g = policy_gradient(batch, policy);
  auto fvp = [&](const Eigen::VectorXd& v) {
    return policy.fisher_vector_product(batch.traj, v);
  };
  const NaturalStep step = natural_gradient_step(fvp, g, cfg_.delta_kl, cfg_.cg_iters);
  if (!step.valid) {
    stats.note = "skipped: non-positive g.d";
    stats.mean_kl = 0.0;
    return stats;
  }
  policy.params() += step.alpha * step.direction;
  stats.updated = true;
  stats.mean_kl = policy.mean_kl_from(old_dist, batch.traj);
  return stats;
}

UpdateStats Trpo::update(const BatchSample& batch, StochasticPolicy& policy) {
  UpdateStats stats;
  const GaussianDist old_dist = policy.dist(batch.traj);
  const Eigen::VectorXd logp_old = policy.log_probs(batch.traj);
  const double loss_old = batch.advantages.mean();  // ratio = 1 at theta_old
  const Eigen::VectorXd g = policy_gradient(batch, policy);
  auto fvp = [&](const Eigen::VectorXd& v) {
    return policy.fisher_vector_product(batch.traj, v);
  };
  const NaturalStep step = natural_gradient_step(fvp, g, cfg_.delta_kl, cfg_.cg_iters);
  if (!step.valid) {
    stats.note = "skipped: non-positive g.d";
    stats.mean_kl = 0.0;
    return stats;
  }

  const Eigen::VectorXd theta_old = policy.params();
  double scale = step.alpha;
  for (int k = 0; k <= cfg_.max_backtracks; ++k, scale *= cfg_.backtrack_ratio) {
    policy.params() = theta_old + scale * step.direction;
    const double kl = policy.mean_kl_from(old_dist, batch.traj);
    const double loss = surrogate_loss(batch, policy, logp_old);
    if (loss > loss_old && kl <= cfg_.delta_kl) {
      stats.updated = true;
      stats.mean_kl = kl;
      stats.objective = loss;
      return stats;
    }
  }
  policy.params() = theta_old;  // line search exhausted
  stats.note = "skipped: line search exhausted";
  stats.mean_kl = 0.0;
  return stats;
}

Eigen::VectorXd Rwr::shifted_weights(const Eigen::VectorXd& advantages) {
  return advantages.array() - advantages.minCoeff();
}

UpdateStats Rwr::update(const BatchSample& batch, StochasticPolicy& policy) {
  UpdateStats stats;
  if (batch.size() == 0) throw std::invalid_argument("rwr: empty batch");
  const Eigen::VectorXd w = shifted_weights(batch.advantages);
  if (w.maxCoeff() <= 0.0) {
    stats.note = "skipped: constant advantages give all-zero weights";
    stats.mean_kl = 0.0;
    return stats;
  }
  const GaussianDist old_dist = policy.dist(batch.traj);
  weighted_ml_fit(policy, batch.traj, w, inner_steps_, inner_lr_);
  stats.updated = true;
  stats.mean_kl = policy.mean_kl_from(old_dist, batch.traj);
  return stats;
}

}  // namespace rlbench
