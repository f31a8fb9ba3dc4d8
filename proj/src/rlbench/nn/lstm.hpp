#pragma once

#include "rlbench/nn/policies.hpp"

namespace rlbench {

// Recurrent Gaussian policy: one LSTM layer (32 gated units by default) fed
// with (o_t, a_{t-1}), a linear mean head, and a global log-std. The initial
// hidden and cell states are zero and a_{-1} is the zero action. Gradients
// flow through the whole episode (backpropagation through time).
class LstmGaussianPolicy : public StochasticPolicy {
 public:
  LstmGaussianPolicy(int obs_dim, int act_dim, int hidden, Rng& rng);
  static constexpr int kDefaultHidden = 32;

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

  int hidden_dim() const { return hidden_; }
  Eigen::VectorXd log_std() const { return theta_.segment(off_logstd_, act_dim_); }

  // one recurrence step at the current parameters; used by the sampler
  void step_cell(const Eigen::VectorXd& input, Eigen::VectorXd& h,
                 Eigen::VectorXd& c) const;
  Eigen::VectorXd mean_from_hidden(const Eigen::VectorXd& h) const;

 private:
  // per-trajectory unroll cache for the backward and forward-mode passes
  struct Unroll {
    std::vector<Eigen::VectorXd> inputs;  // x_t = (o_t, a_{t-1})
    std::vector<Eigen::VectorXd> gates_i, gates_f, gates_g, gates_o;
    std::vector<Eigen::VectorXd> cells, tanh_cells, hiddens;
  };
  void unroll_traj(const TrajBatch& batch, int traj, Unroll& u,
                   Eigen::MatrixXd& means) const;
  void bptt_traj(const Unroll& u, const Eigen::MatrixXd& d_means, int begin,
                 Eigen::Ref<Eigen::VectorXd> grad) const;
  void jvp_traj(const Unroll& u, const Eigen::VectorXd& v, int begin,
                Eigen::MatrixXd& d_means) const;

  // parameter views
  Eigen::Map<const Eigen::MatrixXd> wx(const Eigen::VectorXd& t) const;
  Eigen::Map<const Eigen::MatrixXd> wh(const Eigen::VectorXd& t) const;
  Eigen::Map<const Eigen::VectorXd> b(const Eigen::VectorXd& t) const;
  Eigen::Map<const Eigen::MatrixXd> wout(const Eigen::VectorXd& t) const;
  Eigen::Map<const Eigen::VectorXd> bout(const Eigen::VectorXd& t) const;

  int obs_dim_, act_dim_, hidden_, input_dim_;
  Eigen::VectorXd theta_;
  FlatLayout layout_;
  int off_wx_, off_wh_, off_b_, off_wout_, off_bout_, off_logstd_;
};

}  // namespace rlbench
