#include "rlbench/algos/cg.hpp"

#include <cmath>
#include <stdexcept>

namespace rlbench {

Eigen::VectorXd conjugate_gradient(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_a,
    const Eigen::VectorXd& b, int max_iters, double residual_tol) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = b;
  double rs = r.squaredNorm();
  const double b_norm = std::sqrt(rs);
  if (b_norm == 0.0) return x;

  for (int i = 0; i < max_iters; ++i) {
    const Eigen::VectorXd ap = apply_a(p);
    const double pap = p.dot(ap);
    if (!std::isfinite(pap))
      throw std::runtime_error("conjugate_gradient: non-finite curvature");
    if (pap <= 0.0) break;  // operator not positive definite along p
    const double alpha = rs / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rs_new = r.squaredNorm();
    if (!std::isfinite(rs_new))
      throw std::runtime_error("conjugate_gradient: non-finite residual");
    if (std::sqrt(rs_new) / b_norm < residual_tol) break;
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  return x;
}

}  // namespace rlbench
