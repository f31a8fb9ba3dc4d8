#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rlbench/core/env.hpp"
#include "rlbench/nn/policies.hpp"

namespace rlbench {

// Experiment configuration, read from a flat key/value text file with
// [task], [algorithm], [protocol], and optional [grid] sections.
struct ExperimentConfig {
  // [task]
  std::string task = "cartpole_balance";
  std::vector<std::string> wrappers;  // applied inside-out, left to right
  double noise_sigma = 0.1;
  int delay_frames = 3;
  std::map<std::string, double> physics;  // keys of "physics.<param>"

  // [algorithm]
  std::string algorithm = "trpo";
  std::string policy = "";  // "mlp" | "lstm"; empty = by task category
  std::vector<int> hidden;  // empty = architecture default
  std::map<std::string, double> hyper;  // algorithm hyperparameters

  // [protocol]
  int sim_steps_per_iter = 50000;
  int num_iterations = 500;
  int horizon = 500;
  double discount = 0.99;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

  // [grid]
  std::string grid_param;
  std::vector<double> grid_values;

  // derived
  bool partially_observable() const { return !wrappers.empty(); }
  std::string policy_kind() const {
    return policy.empty() ? (partially_observable() ? "lstm" : "mlp") : policy;
  }
  // results-directory id: task name plus wrapper shortcodes (ls/no/si)
  std::string task_id() const;

  void validate() const;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);
};

// environment with physics overrides and wrappers applied
std::unique_ptr<Env> build_env(const ExperimentConfig& config);

// per-seed policy; initialization draws from (seed, kPolicyInit)
std::unique_ptr<StochasticPolicy> build_stochastic_policy(
    const ExperimentConfig& config, const EnvSpec& spec, std::uint64_t seed);

// best-known hyperparameter defaults per (task, algorithm); values present
// in config.hyper win
double hyperparameter(const ExperimentConfig& config, const std::string& name);
bool has_hyperparameter(const ExperimentConfig& config, const std::string& name);

const std::vector<std::string>& algorithm_names();

}  // namespace rlbench
