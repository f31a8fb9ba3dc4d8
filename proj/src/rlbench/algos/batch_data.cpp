#include "rlbench/algos/batch_data.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

#include "rlbench/core/returns.hpp"

namespace rlbench {

Eigen::VectorXd baseline_features(const Eigen::VectorXd& observation, int t) {
  const int d = static_cast<int>(observation.size());
  Eigen::VectorXd phi(2 * d + 4);
  phi.head(d) = observation;
  phi.segment(d, d) = observation.cwiseProduct(observation);
  const double ts = 0.01 * t;
  phi[2 * d] = ts;
  phi[2 * d + 1] = ts * ts;
  phi[2 * d + 2] = ts * ts * ts;
  phi[2 * d + 3] = 1.0;
  return phi;
}

void LinearBaseline::fit(const Eigen::MatrixXd& features,
                         const Eigen::VectorXd& returns) {
  if (features.rows() == 0)
    throw std::invalid_argument("LinearBaseline: need at least one sample");
  const Eigen::MatrixXd gram =
      features.transpose() * features +
      kRidge * Eigen::MatrixXd::Identity(features.cols(), features.cols());
  coeffs_ = gram.ldlt().solve(features.transpose() * returns);
}

Eigen::VectorXd LinearBaseline::predict(const Eigen::MatrixXd& features) const {
  if (!fitted()) throw std::logic_error("LinearBaseline: not fitted");
  return features * coeffs_;
}

BatchSample BatchSample::build(const std::vector<Trajectory>& trajs,
                               double gamma) {
  BatchSample b;
  b.traj = TrajBatch::from_trajectories(trajs);
  const int n = b.traj.size();
  const int obs_dim = static_cast<int>(b.traj.observations.cols());

  b.rewards.resize(n);
  b.times.resize(n);
  b.returns.resize(n);
  b.next_observations.resize(n, obs_dim);

  int row = 0;
  for (const auto& t : trajs) {
    const auto ret = discounted_returns(t.rewards, gamma);
    for (int i = 0; i < t.length(); ++i) {
      b.rewards[row] = t.rewards[i];
      b.times[row] = i;
      b.returns[row] = ret[i];
      b.next_observations.row(row) =
          (i + 1 < t.length() ? t.observations[i + 1] : t.final_observation)
              .transpose();
      ++row;
    }
    b.episode_returns.push_back(t.total_reward());
    b.episode_terminated.push_back(t.terminated);
  }

  Eigen::MatrixXd phi(n, 2 * obs_dim + 4);
  for (int i = 0; i < n; ++i)
    phi.row(i) =
        baseline_features(b.traj.observations.row(i).transpose(), b.times[i])
            .transpose();
  LinearBaseline baseline;
  baseline.fit(phi, b.returns);
  b.baselines = baseline.predict(phi);
  b.advantages = b.returns - b.baselines;
  return b;
}

}  // namespace rlbench
