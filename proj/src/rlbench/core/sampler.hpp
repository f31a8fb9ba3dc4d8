#pragma once

#include <cstdint>
#include <vector>

#include "rlbench/core/parallel.hpp"
#include "rlbench/core/rollout.hpp"

namespace rlbench {

// Collects whole trajectories until at least step_budget simulation steps
// are consumed (the last trajectory may overshoot and is counted fully).
// Trajectory k draws from stream (kSampling, iteration, k), so the serial
// and OpenMP paths return identical batches: rollouts run in waves, results
// are consumed in stream order, and any wave surplus past the budget is
// discarded exactly as the serial loop would never have sampled it.
std::vector<Trajectory> collect_batch(const Env& env, const Policy& policy,
                                      int horizon, int step_budget,
                                      std::uint64_t seed,
                                      std::uint64_t iteration, ExecMode mode);

}  // namespace rlbench
