#include "rlbench/algos/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rlbench {

Cmaes::Cmaes(const Eigen::VectorXd& initial_mean, Config config)
    : n_(static_cast<int>(initial_mean.size())),
      mean_(initial_mean),
      sigma_(config.sigma0) {
  if (n_ < 1) throw std::invalid_argument("Cmaes: empty parameter vector");
  if (n_ > config.max_params)
    throw std::invalid_argument(
        "Cmaes: parameter count exceeds the full-covariance limit (" +
        std::to_string(config.max_params) + "); memory grows as n^2");
  if (!(sigma_ > 0.0)) throw std::invalid_argument("Cmaes: sigma0 must be > 0");

  lambda_ = config.lambda > 0
                ? config.lambda
                : 4 + static_cast<int>(std::floor(3.0 * std::log(n_)));
  if (lambda_ < 4) lambda_ = 4;
  mu_ = lambda_ / 2;

  weights_.resize(mu_);
  for (int i = 0; i < mu_; ++i)
    weights_[i] = std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
  weights_ /= weights_.sum();
  mu_eff_ = 1.0 / weights_.squaredNorm();

  c_sigma_ = (mu_eff_ + 2.0) / (n_ + mu_eff_ + 5.0);
  d_sigma_ = 1.0 +
             2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n_ + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / n_) / (n_ + 4.0 + 2.0 * mu_eff_ / n_);
  c_1_ = 2.0 / ((n_ + 1.3) * (n_ + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                   ((n_ + 2.0) * (n_ + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(static_cast<double>(n_)) *
           (1.0 - 1.0 / (4.0 * n_) + 1.0 / (21.0 * n_ * n_));

  cov_ = Eigen::MatrixXd::Identity(n_, n_);
  path_sigma_ = Eigen::VectorXd::Zero(n_);
  path_c_ = Eigen::VectorXd::Zero(n_);
  eig_basis_ = Eigen::MatrixXd::Identity(n_, n_);
  eig_scale_ = Eigen::VectorXd::Ones(n_);
  eigen_interval_ =
      std::max(1, static_cast<int>(1.0 / ((c_1_ + c_mu_) * n_ * 10.0)));
}

void Cmaes::update_eigensystem(bool force) {
  if (!force && generation_ - eigen_updated_at_ < eigen_interval_) return;
  eigen_updated_at_ = generation_;
  // enforce symmetry before decomposing; drift is pure round-off
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_);
  Eigen::VectorXd evals = solver.eigenvalues();
  const double max_ev = evals.maxCoeff();
  const double floor_ev = std::max(1e-30, 1e-14 * std::max(1.0, max_ev));
  bool repaired = false;
  for (int i = 0; i < n_; ++i)
    if (evals[i] < floor_ev) {
      evals[i] = floor_ev;
      repaired = true;
    }
  if (repaired) {
    ++repairs_;
    cov_ = solver.eigenvectors() * evals.asDiagonal() *
           solver.eigenvectors().transpose();
  }
  eig_basis_ = solver.eigenvectors();
  eig_scale_ = evals.cwiseSqrt();
}

Eigen::MatrixXd Cmaes::ask(Rng& rng) {
  update_eigensystem(false);
  Eigen::MatrixXd samples(lambda_, n_);
  for (int i = 0; i < lambda_; ++i) {
    const Eigen::VectorXd z = rng.normal_vector(n_);
    samples.row(i) =
        (mean_ + sigma_ * (eig_basis_ * eig_scale_.cwiseProduct(z).eval()))
            .transpose();
  }
  return samples;
}

void Cmaes::tell(const Eigen::MatrixXd& samples, const Eigen::VectorXd& scores) {
  if (samples.rows() != lambda_ || scores.size() != lambda_)
    throw std::invalid_argument("Cmaes::tell: population size mismatch");

  // rank by score, best first (maximization); non-finite scores rank last
  Eigen::VectorXd ranked = scores;
  for (int i = 0; i < lambda_; ++i)
    if (!std::isfinite(ranked[i]))
      ranked[i] = -std::numeric_limits<double>::infinity();
  std::vector<int> order(lambda_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ranked[a] > ranked[b]; });

  const Eigen::VectorXd old_mean = mean_;
  Eigen::MatrixXd y_elite(mu_, n_);  // (x - m_old) / sigma for the best mu
  for (int i = 0; i < mu_; ++i)
    y_elite.row(i) = (samples.row(order[i]) - old_mean.transpose()) / sigma_;
  const Eigen::VectorXd y_w = y_elite.transpose() * weights_;

  mean_ = old_mean + sigma_ * y_w;

  // cumulative step-size adaptation in the isotropic coordinates
  const Eigen::VectorXd c_inv_sqrt_yw =
      eig_basis_ *
      (eig_basis_.transpose() * y_w).cwiseQuotient(eig_scale_).eval();
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * c_inv_sqrt_yw;

  ++generation_;
  const double ps_norm = path_sigma_.norm();
  const double expected = std::sqrt(
      1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_));
  const bool h_sigma = ps_norm / expected < (1.4 + 2.0 / (n_ + 1.0)) * chi_n_;

  path_c_ = (1.0 - c_c_) * path_c_;
  if (h_sigma)
    path_c_ += std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * y_w;

  // rank-1 + rank-mu covariance update
  const double delta_h = (1.0 - (h_sigma ? 1.0 : 0.0)) * c_c_ * (2.0 - c_c_);
  cov_ *= 1.0 - c_1_ - c_mu_ + c_1_ * delta_h;
  cov_ += c_1_ * path_c_ * path_c_.transpose();
  for (int i = 0; i < mu_; ++i)
    cov_ += c_mu_ * weights_[i] * y_elite.row(i).transpose() * y_elite.row(i);

  sigma_ *= std::exp(c_sigma_ / d_sigma_ * (ps_norm / chi_n_ - 1.0));
  if (!std::isfinite(sigma_) || sigma_ <= 0.0)
    throw std::runtime_error("Cmaes: step size diverged");
}

}  // namespace rlbench
