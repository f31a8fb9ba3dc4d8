#include "rlbench/core/rollout.hpp"

#include <stdexcept>

namespace rlbench {

Trajectory rollout(Env& env, ActionSampler& sampler, int horizon, Rng& rng) {
  Trajectory traj;
  if (horizon <= 0) return traj;

  const EnvSpec& spec = env.spec();
  Eigen::VectorXd obs = env.reset(rng);
  sampler.reset();

  traj.observations.reserve(horizon);
  traj.actions.reserve(horizon);
  traj.rewards.reserve(horizon);

  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd action = sampler.act(obs, rng);
    if (action.size() != spec.action_dim)
      throw std::invalid_argument(
          "rollout: policy action dimension does not match the environment");
    const Eigen::VectorXd applied =
        action.cwiseMax(spec.action_lower).cwiseMin(spec.action_upper);
    StepResult sr = env.step(applied);

    traj.observations.push_back(std::move(obs));
    traj.actions.push_back(std::move(action));
    traj.rewards.push_back(sr.reward);
    obs = std::move(sr.observation);

    if (sr.terminated) {
      traj.terminated = true;
      break;
    }
  }
  traj.final_observation = std::move(obs);
  return traj;
}

}  // namespace rlbench
