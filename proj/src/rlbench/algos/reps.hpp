#pragma once

#include "rlbench/algos/batch_algos.hpp"

namespace rlbench {

// Relative entropy policy search. Each iteration minimizes the dual
//   g(eta, nu) = eta*delta_kl + eta*log((1/M) sum_i exp(delta_i(nu)/eta))
// over eta > 0 and nu, with delta_i(nu) = r_i + nu.(phi(s'_i) - phi(s_i)),
// then refits the policy by exp(delta_i/eta*)-weighted maximum likelihood.
// State features are phi(s) = concat(s, s*s, 1).
class Reps : public BatchAlgorithm {
 public:
  struct Config {
    double delta_kl = 1e-2;
    double dual_grad_tol = 1e-5;
    int dual_max_iters = 500;
    int ml_steps = 10;
    double ml_lr = 1e-2;
  };

  explicit Reps(Config config) : cfg_(config) {}
  std::string name() const override { return "reps"; }
  UpdateStats update(const BatchSample&, StochasticPolicy&) override;

  static Eigen::VectorXd state_features(const Eigen::VectorXd& observation);

  // dual pieces, exposed for oracle tests; rows of dphi are phi(s') - phi(s)
  static double dual_value(double eta, const Eigen::VectorXd& nu,
                           const Eigen::VectorXd& rewards,
                           const Eigen::MatrixXd& dphi, double delta_kl);
  static void dual_gradient(double eta, const Eigen::VectorXd& nu,
                            const Eigen::VectorXd& rewards,
                            const Eigen::MatrixXd& dphi, double delta_kl,
                            double& d_eta, Eigen::VectorXd& d_nu);

  struct DualSolution {
    double eta = 1.0;
    Eigen::VectorXd nu;
    bool converged = false;
    int iterations = 0;
  };
  static DualSolution minimize_dual(const Eigen::VectorXd& rewards,
                                    const Eigen::MatrixXd& dphi,
                                    double delta_kl, double grad_tol,
                                    int max_iters);

  // normalized-to-max exponential weights at the dual solution
  static Eigen::VectorXd sample_weights(double eta, const Eigen::VectorXd& nu,
                                        const Eigen::VectorXd& rewards,
                                        const Eigen::MatrixXd& dphi);

 private:
  Config cfg_;
};

}  // namespace rlbench
