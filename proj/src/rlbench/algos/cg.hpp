#pragma once

#include <functional>

#include <Eigen/Core>

namespace rlbench {

// Conjugate gradient for A x = b with A given as a matrix-free SPD operator.
// Truncated at max_iters; stops early once the relative residual drops below
// residual_tol. Exact (to round-off) after n iterations on an n-dim system.
Eigen::VectorXd conjugate_gradient(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_a,
    const Eigen::VectorXd& b, int max_iters, double residual_tol = 1e-10);

}  // namespace rlbench
