#pragma once

#include <vector>

#include "rlbench/core/env.hpp"
#include "rlbench/nn/policies.hpp"

namespace rlbench {

// Time-varying feature encoding for the linear baseline:
// concat(s, s*s, 0.01t, (0.01t)^2, (0.01t)^3, 1), length 2*obs_dim + 4.
Eigen::VectorXd baseline_features(const Eigen::VectorXd& observation, int t);

// Ridge-regularized least squares of returns on the time-varying features.
class LinearBaseline {
 public:
  static constexpr double kRidge = 1e-5;

  void fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& returns);
  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const;
  bool fitted() const { return coeffs_.size() > 0; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

 private:
  Eigen::VectorXd coeffs_;
};

// Per-timestep dataset for one iteration's update: flattened trajectories
// with returns, baselines, and advantages attached.
struct BatchSample {
  TrajBatch traj;
  Eigen::VectorXd rewards;
  Eigen::VectorXi times;                 // within-episode step index
  Eigen::VectorXd returns;               // discounted with the training gamma
  Eigen::VectorXd baselines;
  Eigen::VectorXd advantages;            // returns - baselines
  Eigen::MatrixXd next_observations;     // s' per step (sample Bellman errors)
  std::vector<double> episode_returns;   // undiscounted, per trajectory
  std::vector<bool> episode_terminated;

  int size() const { return traj.size(); }

  // builds returns, fits the baseline on this batch, fills advantages
  static BatchSample build(const std::vector<Trajectory>& trajs, double gamma);
};

}  // namespace rlbench
