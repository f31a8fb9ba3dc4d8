#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "rlbench/core/env.hpp"
#include "rlbench/core/policy.hpp"
#include "rlbench/nn/mlp.hpp"

namespace rlbench {

// Flattened per-timestep view of a set of trajectories. Rows are timesteps;
// offsets mark trajectory boundaries (offsets[k]..offsets[k+1] is episode k),
// which recurrent policies need to rebuild their unrolls.
struct TrajBatch {
  Eigen::MatrixXd observations;  // n x obs_dim
  Eigen::MatrixXd actions;       // n x act_dim, the sampled (pre-clip) actions
  std::vector<int> offsets;      // size num_trajs()+1; offsets[0] = 0

  int size() const { return static_cast<int>(observations.rows()); }
  int num_trajs() const { return static_cast<int>(offsets.size()) - 1; }

  static TrajBatch from_trajectories(const std::vector<Trajectory>& trajs);
};

// diagonal Gaussian with a state-dependent mean and a shared log-std
struct GaussianDist {
  Eigen::MatrixXd means;    // n x act_dim
  Eigen::VectorXd log_std;  // act_dim
};

double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action);

// KL(p0 || p1) for diagonal Gaussians with means m0, m1 and shared log-stds
double diag_gaussian_kl(const Eigen::VectorXd& m0, const Eigen::VectorXd& s0,
                        const Eigen::VectorXd& m1, const Eigen::VectorXd& s1);

constexpr double kFvpDamping = 1e-5;

// Stochastic policies expose the batch quantities every on-policy algorithm
// is built from: the action distribution, score-function gradients, and
// Fisher-vector products (the KL Hessian at the current parameters).
class StochasticPolicy : public Policy {
 public:
  virtual GaussianDist dist(const TrajBatch& batch) const = 0;

  // gradient of sum_i w_i log pi(a_i|s_i); returns the objective value
  virtual double weighted_logprob_grad(const TrajBatch& batch,
                                       const Eigen::VectorXd& weights,
                                       Eigen::Ref<Eigen::VectorXd> grad) const = 0;

  // I(theta) v averaged over the batch states, plus damping * v
  virtual Eigen::VectorXd fisher_vector_product(
      const TrajBatch& batch, const Eigen::VectorXd& v,
      double damping = kFvpDamping) const = 0;

  virtual std::unique_ptr<StochasticPolicy> clone_stochastic() const = 0;
  std::unique_ptr<Policy> clone() const override { return clone_stochastic(); }

  // derived from dist(): per-step log pi(a_t|.) and mean KL against a
  // snapshot distribution taken before an update
  Eigen::VectorXd log_probs(const TrajBatch& batch) const;
  double mean_kl_from(const GaussianDist& old_dist, const TrajBatch& batch) const;
};

// log pi(a|s) under the policy's current parameters
double log_prob(const StochasticPolicy& policy, const Eigen::VectorXd& obs,
                const Eigen::VectorXd& action);

// mean KL(pi_old(.|s) || pi_new(.|s)) over the batch states; evaluates the
// same architecture at two parameter vectors and restores the current ones
double mean_kl(StochasticPolicy& policy, const Eigen::VectorXd& theta_old,
               const Eigen::VectorXd& theta_new, const TrajBatch& batch);

// Feed-forward Gaussian policy: tanh on the first two hidden layers, linear
// third hidden layer, mean head, and a state-independent log-std vector.
class GaussianMlpPolicy : public StochasticPolicy {
 public:
  GaussianMlpPolicy(int obs_dim, int act_dim, std::vector<int> hidden, Rng& rng);
  static std::vector<int> default_hidden() { return {100, 50, 25}; }

  int obs_dim() const override { return obs_dim_; }
  int act_dim() const override { return act_dim_; }
  Eigen::VectorXd& params() override { return theta_; }
  const Eigen::VectorXd& params() const override { return theta_; }
  const FlatLayout& layout() const override { return layout_; }
  std::string arch_descriptor() const override;
  std::unique_ptr<ActionSampler> make_sampler() const override;
  std::unique_ptr<StochasticPolicy> clone_stochastic() const override;

  GaussianDist dist(const TrajBatch& batch) const override;
  double weighted_logprob_grad(const TrajBatch& batch,
                               const Eigen::VectorXd& weights,
                               Eigen::Ref<Eigen::VectorXd> grad) const override;
  Eigen::VectorXd fisher_vector_product(const TrajBatch& batch,
                                        const Eigen::VectorXd& v,
                                        double damping = kFvpDamping) const override;

  Eigen::VectorXd mean_action(const Eigen::VectorXd& obs) const;
  Eigen::VectorXd log_std() const { return theta_.segment(logstd_offset_, act_dim_); }

 private:
  int obs_dim_, act_dim_;
  Mlp mlp_;
  Eigen::VectorXd theta_;
  FlatLayout layout_;
  int logstd_offset_ = 0;
  std::vector<int> hidden_;
};

}  // namespace rlbench
