#include "rlbench/algos/cem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rlbench {

Cem::Cem(const Eigen::VectorXd& initial_mean, Config config)
    : cfg_(config),
      mean_(initial_mean),
      var_(Eigen::VectorXd::Constant(initial_mean.size(),
                                     config.init_std * config.init_std)) {
  if (!(cfg_.elite_frac > 0.0 && cfg_.elite_frac <= 1.0))
    throw std::invalid_argument("Cem: elite_frac must be in (0, 1]");
}

double Cem::extra_noise() const {
  const double frac =
      1.0 - static_cast<double>(iteration_) / cfg_.extra_noise_decay_iters;
  return cfg_.extra_noise_init * std::max(0.0, frac);
}

Eigen::MatrixXd Cem::sample(int population, Rng& rng) const {
  if (population < 2) throw std::invalid_argument("Cem: population must be >= 2");
  const int dim = static_cast<int>(mean_.size());
  const Eigen::ArrayXd std = var_.array().sqrt();
  Eigen::MatrixXd samples(population, dim);
  for (int i = 0; i < population; ++i)
    samples.row(i) =
        (mean_.array() + std * rng.normal_vector(dim).array()).transpose();
  return samples;
}

Cem::IterationResult Cem::update(const Eigen::MatrixXd& samples,
                                 const std::vector<double>& returns) {
  const int population = static_cast<int>(samples.rows());
  if (static_cast<int>(returns.size()) != population)
    throw std::invalid_argument("Cem: returns/population size mismatch");
  const int n_elite =
      std::max(1, static_cast<int>(std::lround(cfg_.elite_frac * population)));
  const int dim = static_cast<int>(mean_.size());

  IterationResult result;
  result.returns = returns;

  // rank by return; non-finite evaluations are excluded from the elite pool
  std::vector<int> order;
  for (int i = 0; i < population; ++i)
    if (std::isfinite(returns[i])) order.push_back(i);
  if (order.empty()) throw std::runtime_error("Cem: every evaluation was non-finite");
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return returns[a] > returns[b]; });
  const int kept = std::min<int>(n_elite, static_cast<int>(order.size()));
  result.elite.assign(order.begin(), order.begin() + kept);
  result.best_return = returns[order.front()];
  result.best_params = samples.row(order.front()).transpose();

  Eigen::VectorXd new_mean = Eigen::VectorXd::Zero(dim);
  for (int idx : result.elite) new_mean += samples.row(idx).transpose();
  new_mean /= kept;
  Eigen::VectorXd new_var = Eigen::VectorXd::Zero(dim);
  for (int idx : result.elite) {
    const Eigen::VectorXd d = samples.row(idx).transpose() - new_mean;
    new_var += d.cwiseProduct(d);
  }
  new_var /= kept;

  mean_ = new_mean;
  var_ = new_var.array() + extra_noise();
  ++iteration_;
  return result;
}

Cem::IterationResult Cem::iterate(
    int population,
    const std::function<double(const Eigen::VectorXd&, int)>& evaluate,
    Rng& rng) {
  const Eigen::MatrixXd samples = sample(population, rng);
  std::vector<double> returns(population);
  for (int i = 0; i < population; ++i)
    returns[i] = evaluate(samples.row(i).transpose(), i);
  return update(samples, returns);
}

}  // namespace rlbench
