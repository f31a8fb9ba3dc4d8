#include "rlbench/harness/grid.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "rlbench/harness/stats.hpp"

namespace rlbench {

int grid_select(const std::vector<std::vector<double>>& per_point_seed_scores) {
  if (per_point_seed_scores.empty())
    throw std::invalid_argument("grid_select: empty grid");
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < per_point_seed_scores.size(); ++i) {
    const auto& seeds = per_point_seed_scores[i];
    if (seeds.empty()) continue;
    const double score = mean(seeds) - population_std(seeds);
    if (score > best_score) {  // strict: ties keep the lower index
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw std::runtime_error("grid_select: no scored grid point");
  return best;
}

GridResult run_grid_search(const ExperimentConfig& config, const RunOptions& opts) {
  if (config.grid_param.empty() || config.grid_values.empty())
    throw std::invalid_argument("grid search needs [grid] param and values");

  GridResult result;
  std::vector<std::vector<double>> seed_scores;
  for (const double value : config.grid_values) {
    ExperimentConfig point = config;
    point.hyper[config.grid_param] = value;
    RunOptions point_opts = opts;
    std::ostringstream dir;
    dir << opts.out_dir << "/grid/" << config.grid_param << "=" << value;
    point_opts.out_dir = dir.str();

    std::vector<double> scores;
    std::string error;
    try {
      run_experiment(point, point_opts);
      for (const auto seed : point.seeds)
        scores.push_back(seed_performance(point_opts, point, seed));
    } catch (const std::exception& e) {
      error = e.what();
      scores.clear();
    }
    result.errors.push_back(error);
    result.scores.push_back(scores.empty()
                                ? std::nan("")
                                : mean(scores) - population_std(scores));
    seed_scores.push_back(std::move(scores));
  }

  bool any = false;
  for (const auto& s : seed_scores) any = any || !s.empty();
  if (!any) {
    std::ostringstream msg;
    msg << "grid search: every point failed;";
    for (std::size_t i = 0; i < result.errors.size(); ++i)
      msg << " [" << config.grid_param << "=" << config.grid_values[i] << ": "
          << result.errors[i] << "]";
    throw std::runtime_error(msg.str());
  }
  result.best_index = grid_select(seed_scores);
  result.best_value = config.grid_values[result.best_index];
  return result;
}

}  // namespace rlbench
