#pragma once

#include <cmath>

#include <Eigen/Core>

namespace rlbench {

// Adaptive moment estimation for minimization; callers doing ascent negate
// the gradient. Weight decay, when set, adds decay * theta to the gradient.
class Adam {
 public:
  explicit Adam(double lr, double weight_decay = 0.0, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), decay_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
    if (m_.size() != theta.size()) {
      m_ = Eigen::VectorXd::Zero(theta.size());
      v_ = Eigen::VectorXd::Zero(theta.size());
      t_ = 0;
    }
    ++t_;
    Eigen::VectorXd g = grad;
    if (decay_ != 0.0) g += decay_ * theta;
    m_ = beta1_ * m_ + (1.0 - beta1_) * g;
    v_ = beta2_ * v_ + (1.0 - beta2_) * g.cwiseProduct(g);
    const double corr1 = 1.0 - std::pow(beta1_, t_);
    const double corr2 = 1.0 - std::pow(beta2_, t_);
    theta.array() -= lr_ * (m_.array() / corr1) /
                     ((v_.array() / corr2).sqrt() + eps_);
  }

 private:
  double lr_, decay_, beta1_, beta2_, eps_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

}  // namespace rlbench
