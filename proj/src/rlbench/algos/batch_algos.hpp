#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "rlbench/algos/batch_data.hpp"
#include "rlbench/nn/policies.hpp"

namespace rlbench {

struct UpdateStats {
  bool updated = false;
  double mean_kl = std::numeric_limits<double>::quiet_NaN();
  double objective = 0.0;  // algorithm-specific diagnostic
  std::string note;
};

// On-policy batch algorithms: consume one iteration's BatchSample, update the
// policy parameters in place.
class BatchAlgorithm {
 public:
  virtual ~BatchAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual UpdateStats update(const BatchSample& batch,
                             StochasticPolicy& policy) = 0;
};

// ---- shared natural-gradient machinery ----

struct NaturalStep {
  Eigen::VectorXd direction;  // approximate I^{-1} g from truncated CG
  double alpha = 0.0;         // sqrt(delta_kl / g.d)
  bool valid = false;
};

// Solves I d = g with truncated CG and sizes the step so the quadratic KL
// model predicts delta_kl/2; invalid when g.d is not positive.
NaturalStep natural_gradient_step(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fvp,
    const Eigen::VectorXd& gradient, double delta_kl, int cg_iters);

// policy-gradient estimate (1/n) sum_t grad log pi * advantage_t
Eigen::VectorXd policy_gradient(const BatchSample& batch,
                                const StochasticPolicy& policy);

// importance-ratio surrogate (1/n) sum_t ratio_t * advantage_t, with ratios
// against the log-probs recorded at theta_old
double surrogate_loss(const BatchSample& batch, const StochasticPolicy& policy,
                      const Eigen::VectorXd& logp_old);

// fixed-budget weighted maximum-likelihood ascent used by RWR and REPS;
// weights are normalized to mean one inside (argmax-invariant), steps use a
// constant learning rate
void weighted_ml_fit(StochasticPolicy& policy, const TrajBatch& traj,
                     const Eigen::VectorXd& weights, int steps, double lr);

// ---- the algorithms ----

class Reinforce : public BatchAlgorithm {
 public:
  explicit Reinforce(double learning_rate) : lr_(learning_rate) {}
  std::string name() const override { return "reinforce"; }
  UpdateStats update(const BatchSample&, StochasticPolicy&) override;

 private:
  double lr_;
};

struct TrustRegionConfig {
  double delta_kl = 5e-2;
  int cg_iters = 10;
  double backtrack_ratio = 0.8;
  int max_backtracks = 15;
};

class Tnpg : public BatchAlgorithm {
 public:
  explicit Tnpg(TrustRegionConfig config) : cfg_(config) {}
  std::string name() const override { return "tnpg"; }
  UpdateStats update(const BatchSample&, StochasticPolicy&) override;

 private:
  TrustRegionConfig cfg_;
};

class Trpo : public BatchAlgorithm {
 public:
  explicit Trpo(TrustRegionConfig config) : cfg_(config) {}
  std::string name() const override { return "trpo"; }
  UpdateStats update(const BatchSample&, StochasticPolicy&) override;

 private:
  TrustRegionConfig cfg_;
};

class Rwr : public BatchAlgorithm {
 public:
  Rwr(int inner_steps, double inner_lr)
      : inner_steps_(inner_steps), inner_lr_(inner_lr) {}
  std::string name() const override { return "rwr"; }
  UpdateStats update(const BatchSample&, StochasticPolicy&) override;

  // nonnegative weights: z - min(z) over the batch
  static Eigen::VectorXd shifted_weights(const Eigen::VectorXd& advantages);

 private:
  int inner_steps_;
  double inner_lr_;
};

}  // namespace rlbench
