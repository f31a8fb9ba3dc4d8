#include "rlbench/algos/reps.hpp"

#include <cmath>
#include <stdexcept>

namespace rlbench {

Eigen::VectorXd Reps::state_features(const Eigen::VectorXd& s) {
  const int d = static_cast<int>(s.size());
  Eigen::VectorXd phi(2 * d + 1);
  phi.head(d) = s;
  phi.segment(d, d) = s.cwiseProduct(s);
  phi[2 * d] = 1.0;
  return phi;
}

namespace {
// log((1/M) sum exp(delta_i/eta)) with max subtraction, plus the softmax
struct DualTerms {
  double log_mean_exp;
  Eigen::VectorXd softmax;
  Eigen::VectorXd delta;
};

DualTerms dual_terms(double eta, const Eigen::VectorXd& nu,
                     const Eigen::VectorXd& rewards, const Eigen::MatrixXd& dphi) {
  DualTerms t;
  t.delta = rewards + dphi * nu;
  const double m = t.delta.maxCoeff();
  const Eigen::ArrayXd e = ((t.delta.array() - m) / eta).exp();
  const double mean_e = e.mean();
  t.log_mean_exp = m / eta + std::log(mean_e);
  t.softmax = (e / e.sum()).matrix();
  return t;
}
}  // namespace

double Reps::dual_value(double eta, const Eigen::VectorXd& nu,
                        const Eigen::VectorXd& rewards,
                        const Eigen::MatrixXd& dphi, double delta_kl) {
  if (!(eta > 0.0)) throw std::domain_error("reps dual: eta must be positive");
  const DualTerms t = dual_terms(eta, nu, rewards, dphi);
  return eta * delta_kl + eta * t.log_mean_exp;
}

void Reps::dual_gradient(double eta, const Eigen::VectorXd& nu,
                         const Eigen::VectorXd& rewards,
                         const Eigen::MatrixXd& dphi, double delta_kl,
                         double& d_eta, Eigen::VectorXd& d_nu) {
  if (!(eta > 0.0)) throw std::domain_error("reps dual: eta must be positive");
  const DualTerms t = dual_terms(eta, nu, rewards, dphi);
  d_eta = delta_kl + t.log_mean_exp - t.softmax.dot(t.delta) / eta;
  d_nu = dphi.transpose() * t.softmax;
}

Reps::DualSolution Reps::minimize_dual(const Eigen::VectorXd& rewards,
                                       const Eigen::MatrixXd& dphi,
                                       double delta_kl, double grad_tol,
                                       int max_iters) {
  // gradient descent with backtracking on x = (log eta, nu); eta > 0 is
  // enforced by the exponential reparameterization
  const int k = static_cast<int>(dphi.cols());
  DualSolution best;
  best.nu = Eigen::VectorXd::Zero(k);
  double log_eta = 0.0;
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(k);
  double value = dual_value(std::exp(log_eta), nu, rewards, dphi, delta_kl);
  double best_value = value;
  best.eta = std::exp(log_eta);

  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    const double eta = std::exp(log_eta);
    double d_eta;
    Eigen::VectorXd d_nu;
    dual_gradient(eta, nu, rewards, dphi, delta_kl, d_eta, d_nu);
    const double d_log_eta = d_eta * eta;  // chain rule through exp

    Eigen::VectorXd grad(k + 1);
    grad[0] = d_log_eta;
    grad.tail(k) = d_nu;
    best.iterations = it + 1;
    if (grad.norm() < grad_tol) {
      best.converged = true;
      break;
    }

    // backtracking until the value decreases; grow the step on success
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const double cand_log_eta = log_eta - step * d_log_eta;
      const Eigen::VectorXd cand_nu = nu - step * d_nu;
      const double cand = dual_value(std::exp(cand_log_eta), cand_nu, rewards,
                                     dphi, delta_kl);
      if (std::isfinite(cand) && cand < value) {
        log_eta = cand_log_eta;
        nu = cand_nu;
        value = cand;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (value < best_value) {
      best_value = value;
      best.eta = std::exp(log_eta);
      best.nu = nu;
    }
    if (!moved) break;  // no descent direction at this scale
  }
  if (!(best_value < std::numeric_limits<double>::infinity()))
    throw std::runtime_error("reps dual: diverged");
  return best;
}

Eigen::VectorXd Reps::sample_weights(double eta, const Eigen::VectorXd& nu,
                                     const Eigen::VectorXd& rewards,
                                     const Eigen::MatrixXd& dphi) {
  const Eigen::VectorXd delta = rewards + dphi * nu;
  const double m = delta.maxCoeff();
  return ((delta.array() - m) / eta).exp().matrix();
}

UpdateStats Reps::update(const BatchSample& batch, StochasticPolicy& policy) {
  UpdateStats stats;
  const int n = batch.size();
  if (n == 0) throw std::invalid_argument("reps: empty batch");
  const int obs_dim = static_cast<int>(batch.traj.observations.cols());

  Eigen::MatrixXd dphi(n, 2 * obs_dim + 1);
  for (int i = 0; i < n; ++i)
    dphi.row(i) = (state_features(batch.next_observations.row(i).transpose()) -
                   state_features(batch.traj.observations.row(i).transpose()))
                      .transpose();

  const DualSolution sol = minimize_dual(batch.rewards, dphi, cfg_.delta_kl,
                                         cfg_.dual_grad_tol, cfg_.dual_max_iters);
  if (!sol.converged) stats.note = "dual: using best iterate after max iters";

  const Eigen::VectorXd w = sample_weights(sol.eta, sol.nu, batch.rewards, dphi);
  const GaussianDist old_dist = policy.dist(batch.traj);
  weighted_ml_fit(policy, batch.traj, w, cfg_.ml_steps, cfg_.ml_lr);
  stats.updated = true;
  stats.mean_kl = policy.mean_kl_from(old_dist, batch.traj);
  stats.objective = sol.eta;
  return stats;
}

}  // namespace rlbench
