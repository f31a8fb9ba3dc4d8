#include "rlbench/core/sampler.hpp"

#include <algorithm>
#include <memory>

namespace rlbench {

namespace {

Trajectory run_one(const Env& env, const Policy& policy, int horizon,
                   std::uint64_t seed, std::uint64_t iteration,
                   std::uint64_t index) {
  auto env_copy = env.clone();
  auto sampler = policy.make_sampler();
  Rng rng(seed, stream_id(StreamTag::kSampling, iteration, index));
  return rollout(*env_copy, *sampler, horizon, rng);
}

}  // namespace

std::vector<Trajectory> collect_batch(const Env& env, const Policy& policy,
                                      int horizon, int step_budget,
                                      std::uint64_t seed,
                                      std::uint64_t iteration, ExecMode mode) {
  std::vector<Trajectory> batch;
  if (step_budget <= 0 || horizon <= 0) return batch;

  const int wave = mode == ExecMode::kSerial ? 1 : std::max(1, num_threads());
  int steps = 0;
  std::uint64_t next_index = 0;
  while (steps < step_budget) {
    std::vector<Trajectory> results(wave);
    parallel_for(wave, mode, [&](int i) {
      results[i] = run_one(env, policy, horizon, seed, iteration,
                           next_index + static_cast<std::uint64_t>(i));
    });
    // consume in stream order; drop the surplus once the budget is met
    for (int i = 0; i < wave && steps < step_budget; ++i) {
      steps += results[i].length();
      batch.push_back(std::move(results[i]));
    }
    next_index += static_cast<std::uint64_t>(wave);
  }
  return batch;
}

}  // namespace rlbench
