#pragma once

#include "rlbench/core/env.hpp"
#include "rlbench/core/policy.hpp"

namespace rlbench {

// Runs one episode: resets the environment, samples actions, stops at the
// first termination or at the horizon. Actions are clipped to the action
// bounds before being applied; the trajectory keeps the raw sample so
// log-probabilities stay well-defined.
Trajectory rollout(Env& env, ActionSampler& sampler, int horizon, Rng& rng);

}  // namespace rlbench
