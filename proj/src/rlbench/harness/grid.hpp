#pragma once

#include "rlbench/harness/experiment.hpp"

namespace rlbench {

// argmax of mean(seed scores) - population_std(seed scores); exact ties go
// to the lower index
int grid_select(const std::vector<std::vector<double>>& per_point_seed_scores);

struct GridResult {
  int best_index = -1;
  double best_value = 0.0;
  std::vector<double> scores;       // criterion per grid point
  std::vector<std::string> errors;  // per-point failure diagnostics, if any
};

// Runs the configured grid: every grid point executes the full experiment
// over all seeds under <out>/grid/<param>=<value>/, then the
// mean-minus-std criterion picks the winner.
GridResult run_grid_search(const ExperimentConfig& config, const RunOptions& opts);

}  // namespace rlbench
