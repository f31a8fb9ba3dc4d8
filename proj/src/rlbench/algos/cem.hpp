#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "rlbench/core/rng.hpp"

namespace rlbench {

// Cross-entropy method over the flat parameter space. Each iteration samples
// a population from N(mu, diag(var)), evaluates it, and refits mean and
// diagonal variance on the top q-quantile; a decaying extra noise is added to
// every variance coordinate. Touches the policy only through the evaluate
// callback, so it never sees gradients.
class Cem {
 public:
  struct Config {
    double elite_frac = 0.2;
    double init_std = 1.0;
    double extra_noise_init = 1e-1;
    int extra_noise_decay_iters = 500;  // linear decay to zero over this many
  };

  Cem(const Eigen::VectorXd& initial_mean, Config config);

  struct IterationResult {
    std::vector<double> returns;   // one entry per evaluated member
    double best_return = 0.0;
    Eigen::VectorXd best_params;
    std::vector<int> elite;        // member indices kept for the refit
  };

  // draws a population from N(mean, diag(var)), one member per row
  Eigen::MatrixXd sample(int population, Rng& rng) const;
  // refits mean/variance on the elite of the evaluated population
  IterationResult update(const Eigen::MatrixXd& samples,
                         const std::vector<double>& returns);

  // sample + evaluate + update in one call; evaluate(member_params, index)
  // must not depend on evaluation order
  IterationResult iterate(
      int population,
      const std::function<double(const Eigen::VectorXd&, int)>& evaluate,
      Rng& rng);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& variance() const { return var_; }
  double extra_noise() const;  // current decayed value
  int iteration() const { return iteration_; }

 private:
  Config cfg_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd var_;
  int iteration_ = 0;
};

}  // namespace rlbench
