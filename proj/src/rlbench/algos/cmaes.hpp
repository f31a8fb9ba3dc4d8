#pragma once

#include <vector>

#include <Eigen/Core>

#include "rlbench/core/rng.hpp"

namespace rlbench {

// (mu/mu_w, lambda) covariance matrix adaptation evolution strategy with
// cumulative step-size adaptation and rank-1 + rank-mu covariance updates
// along the evolution paths. Scores are returns: higher is better.
//
// The covariance is a dense n x n matrix (8 n^2 bytes) and its eigensolve is
// O(n^3), amortized by lazy updates; parameter counts above max_params are
// rejected up front instead of exhausting memory.
class Cmaes {
 public:
  struct Config {
    double sigma0 = 0.5;
    int lambda = 0;  // 0: 4 + floor(3 ln n)
    int max_params = 20000;
  };

  Cmaes(const Eigen::VectorXd& initial_mean, Config config);

  int lambda() const { return lambda_; }
  int dim() const { return n_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  int repairs() const { return repairs_; }  // eigenvalue floor interventions

  // samples lambda candidates, one per row
  Eigen::MatrixXd ask(Rng& rng);

  // consumes the candidates from the matching ask(); higher score = better
  void tell(const Eigen::MatrixXd& samples, const Eigen::VectorXd& scores);

 private:
  void update_eigensystem(bool force);

  int n_;
  int lambda_;
  int mu_;
  Eigen::VectorXd weights_;
  double mu_eff_;
  double c_sigma_, d_sigma_, c_c_, c_1_, c_mu_, chi_n_;

  Eigen::VectorXd mean_;
  double sigma_;
  Eigen::MatrixXd cov_;
  Eigen::VectorXd path_sigma_, path_c_;
  Eigen::MatrixXd eig_basis_;   // B
  Eigen::VectorXd eig_scale_;   // D (sqrt of eigenvalues)
  int generation_ = 0;
  int eigen_updated_at_ = 0;
  int eigen_interval_ = 1;
  int repairs_ = 0;
};

}  // namespace rlbench
