#pragma once

#include <functional>
#include <string>

#include "rlbench/core/parallel.hpp"
#include "rlbench/harness/config.hpp"
#include "rlbench/harness/metrics.hpp"

namespace rlbench {

struct RunOptions {
  std::string out_dir = "results";
  ExecMode mode = ExecMode::kOpenMp;
  int checkpoint_every = 0;  // 0: final iteration only
  bool quiet = false;
};

// Directory layout: <out>/<task_id>/<algorithm>/seed<k>/metrics.csv with
// policy checkpoints alongside as iter<i>.policy.
std::string seed_dir(const RunOptions& opts, const ExperimentConfig& config,
                     std::uint64_t seed);

// Runs every seed of the experiment. Completed iterations found in existing
// metrics files are never rewritten; interrupted seeds are recomputed from
// iteration zero (all randomness is derived from (seed, iteration) streams,
// so the replayed rows are bit-identical) and only missing rows are appended.
void run_experiment(const ExperimentConfig& config, const RunOptions& opts);

// per-seed performance: pooled mean undiscounted return over the whole run
double seed_performance(const RunOptions& opts, const ExperimentConfig& config,
                        std::uint64_t seed);

}  // namespace rlbench
