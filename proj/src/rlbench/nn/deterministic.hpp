#pragma once

#include "rlbench/core/env.hpp"
#include "rlbench/core/policy.hpp"
#include "rlbench/nn/mlp.hpp"

namespace rlbench {

// Deterministic actor: relu MLP with the output squashed onto the action box
// via a scaled tanh, a = center + half_range * tanh(z).
class DeterministicMlpPolicy : public Policy {
 public:
  DeterministicMlpPolicy(int obs_dim, const Eigen::VectorXd& action_lower,
                         const Eigen::VectorXd& action_upper,
                         std::vector<int> hidden, Rng& rng);
  static std::vector<int> default_hidden() { return {400, 300}; }

  int obs_dim() const override { return obs_dim_; }
  int act_dim() const override { return act_dim_; }
  Eigen::VectorXd& params() override { return theta_; }
  const Eigen::VectorXd& params() const override { return theta_; }
  const FlatLayout& layout() const override { return layout_; }
  std::string arch_descriptor() const override;
  std::unique_ptr<ActionSampler> make_sampler() const override;
  std::unique_ptr<Policy> clone() const override;

  Eigen::VectorXd action(const Eigen::VectorXd& obs) const;

  struct Trace {
    Mlp::Trace mlp;
    Eigen::MatrixXd squashed;  // tanh(z)
  };
  Eigen::MatrixXd actions(const Eigen::MatrixXd& obs, Trace* trace) const;
  // accumulates d(sum L)/dtheta given dL/daction
  void backward(const Trace& trace, const Eigen::MatrixXd& d_actions,
                Eigen::Ref<Eigen::VectorXd> grad) const;

  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::VectorXd& half_range() const { return half_range_; }

 private:
  int obs_dim_, act_dim_;
  Eigen::VectorXd center_, half_range_;
  Mlp mlp_;
  Eigen::VectorXd theta_;
  FlatLayout layout_;
  std::vector<int> hidden_;
};

// Scalar state-action value network over concat(s, a), relu hidden layers.
class QFunction {
 public:
  QFunction(int obs_dim, int act_dim, std::vector<int> hidden, Rng& rng);
  static std::vector<int> default_hidden() { return {400, 300}; }

  int num_params() const { return mlp_.num_params(); }
  Eigen::VectorXd& params() { return theta_; }
  const Eigen::VectorXd& params() const { return theta_; }

  Eigen::VectorXd values(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& act,
                         Mlp::Trace* trace) const;
  // given dL/dQ per sample: accumulates the parameter gradient and, when
  // d_actions is non-null, returns dL/da for the actor chain rule
  void backward(const Mlp::Trace& trace, const Eigen::VectorXd& d_values,
                Eigen::Ref<Eigen::VectorXd> grad,
                Eigen::MatrixXd* d_actions = nullptr) const;

  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

 private:
  int obs_dim_, act_dim_;
  Mlp mlp_;
  Eigen::VectorXd theta_;
};

}  // namespace rlbench
