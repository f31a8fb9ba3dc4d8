#include "rlbench/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "rlbench/algos/batch_algos.hpp"
#include "rlbench/algos/cem.hpp"
#include "rlbench/algos/cmaes.hpp"
#include "rlbench/algos/ddpg.hpp"
#include "rlbench/algos/reps.hpp"
#include "rlbench/core/sampler.hpp"
#include "rlbench/nn/checkpoint.hpp"

namespace rlbench {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

std::unique_ptr<BatchAlgorithm> make_batch_algorithm(
    const ExperimentConfig& cfg) {
  const auto& name = cfg.algorithm;
  if (name == "reinforce")
    return std::make_unique<Reinforce>(hyperparameter(cfg, "learning_rate"));
  if (name == "tnpg" || name == "trpo") {
    TrustRegionConfig tr;
    tr.delta_kl = hyperparameter(cfg, "step_size");
    tr.cg_iters = static_cast<int>(hyperparameter(cfg, "cg_iters"));
    if (name == "tnpg") return std::make_unique<Tnpg>(tr);
    tr.backtrack_ratio = hyperparameter(cfg, "backtrack_ratio");
    tr.max_backtracks = static_cast<int>(hyperparameter(cfg, "max_backtracks"));
    return std::make_unique<Trpo>(tr);
  }
  if (name == "rwr")
    return std::make_unique<Rwr>(
        static_cast<int>(hyperparameter(cfg, "inner_steps")),
        hyperparameter(cfg, "inner_lr"));
  if (name == "reps") {
    Reps::Config rc;
    rc.delta_kl = hyperparameter(cfg, "step_size");
    rc.dual_grad_tol = hyperparameter(cfg, "dual_grad_tol");
    rc.dual_max_iters = static_cast<int>(hyperparameter(cfg, "dual_max_iters"));
    rc.ml_steps = static_cast<int>(hyperparameter(cfg, "ml_steps"));
    rc.ml_lr = hyperparameter(cfg, "ml_lr");
    return std::make_unique<Reps>(rc);
  }
  return nullptr;  // population/online algorithms handled separately
}

// rollout return of one parameter vector; used by the population algorithms
double evaluate_params(const Env& env, const StochasticPolicy& prototype,
                       const Eigen::VectorXd& params, int horizon,
                       std::uint64_t seed, std::uint64_t iteration,
                       std::uint64_t member, int* steps_out,
                       Trajectory* traj_out = nullptr) {
  auto policy = prototype.clone_stochastic();
  policy->params() = params;
  auto env_copy = env.clone();
  auto sampler = policy->make_sampler();
  Rng rng(seed, stream_id(StreamTag::kSampling, iteration, member));
  Trajectory traj = rollout(*env_copy, *sampler, horizon, rng);
  if (steps_out) *steps_out = traj.length();
  const double ret = traj.total_reward();
  if (traj_out) *traj_out = std::move(traj);
  return ret;
}

struct SeedRun {
  std::vector<MetricsRow> new_rows;
};

void checkpoint_policy(const Policy& policy, const std::string& dir,
                       int iteration) {
  save_policy(policy, dir + "/iter" + std::to_string(iteration) + ".policy");
}

void run_seed(const ExperimentConfig& cfg, const RunOptions& opts,
              std::uint64_t seed) {
  const std::string dir = seed_dir(opts, cfg, seed);
  fs::create_directories(dir);
  const std::string metrics_path = dir + "/metrics.csv";

  // resume: completed iterations are replayed (deterministically) but only
  // missing rows are appended; torn trailing lines are dropped first
  const auto existing = repair_metrics(metrics_path);
  int last_done = -1;
  for (const auto& r : existing)
    if (r.iteration == last_done + 1) ++last_done;
  if (last_done + 1 >= cfg.num_iterations) return;  // idempotent rerun

  auto env = build_env(cfg);
  const EnvSpec spec = env->spec();

  const bool is_population = cfg.algorithm == "cem" || cfg.algorithm == "cmaes";
  const bool is_online = cfg.algorithm == "ddpg";

  std::unique_ptr<StochasticPolicy> policy;
  std::unique_ptr<BatchAlgorithm> batch_algo;
  std::unique_ptr<Cem> cem;
  std::unique_ptr<Cmaes> cmaes;
  std::unique_ptr<Ddpg> ddpg;
  std::unique_ptr<Env> ddpg_env;
  int population = 0;

  if (is_online) {
    DdpgConfig dc;
    dc.replay_capacity = static_cast<int>(hyperparameter(cfg, "replay_capacity"));
    dc.batch_size = static_cast<int>(hyperparameter(cfg, "batch_size"));
    dc.actor_lr = hyperparameter(cfg, "actor_lr");
    dc.critic_lr = hyperparameter(cfg, "critic_lr");
    dc.critic_weight_decay = hyperparameter(cfg, "critic_weight_decay");
    dc.tau = hyperparameter(cfg, "tau");
    dc.ou_rate = hyperparameter(cfg, "ou_rate");
    dc.ou_sigma = hyperparameter(cfg, "ou_sigma");
    dc.warmup_steps = static_cast<int>(hyperparameter(cfg, "warmup_steps"));
    dc.reward_scale = hyperparameter(cfg, "reward_scale");
    dc.discount = cfg.discount;
    if (!cfg.hidden.empty()) dc.hidden = cfg.hidden;
    Rng init_rng(seed, stream_id(StreamTag::kPolicyInit, 0, 0));
    ddpg = std::make_unique<Ddpg>(spec, dc, init_rng);
    ddpg_env = env->clone();
  } else {
    policy = build_stochastic_policy(cfg, spec, seed);
    if (is_population) {
      // one rollout per sampled parameter; the population is sized so each
      // iteration consumes roughly the sim-step budget
      population = has_hyperparameter(cfg, "population")
                       ? static_cast<int>(hyperparameter(cfg, "population"))
                       : std::max(2, cfg.sim_steps_per_iter / cfg.horizon);
      if (cfg.algorithm == "cem") {
        Cem::Config cc;
        cc.elite_frac = hyperparameter(cfg, "elite_frac");
        cc.init_std = hyperparameter(cfg, "init_std");
        cc.extra_noise_init = hyperparameter(cfg, "extra_noise");
        cc.extra_noise_decay_iters = cfg.num_iterations;
        cem = std::make_unique<Cem>(policy->params(), cc);
      } else {
        Cmaes::Config cc;
        cc.sigma0 = hyperparameter(cfg, "sigma0");
        cc.lambda = population;
        cmaes = std::make_unique<Cmaes>(policy->params(), cc);
        population = cmaes->lambda();
      }
    } else {
      batch_algo = make_batch_algorithm(cfg);
    }
  }

  for (int iter = 0; iter < cfg.num_iterations; ++iter) {
    const auto started = Clock::now();
    std::vector<double> episode_returns;
    double mean_kl = std::nan("");
    long steps = 0;

    if (is_online) {
      Rng explore(seed, stream_id(StreamTag::kExploration, iter, 0));
      const auto res =
          ddpg->run_iteration(*ddpg_env, cfg.sim_steps_per_iter, cfg.horizon,
                              explore);
      episode_returns = res.episode_returns;
      steps = res.steps;
    } else if (is_population) {
      Rng algo_rng(seed, stream_id(StreamTag::kAlgorithm, iter, 0));
      const Eigen::MatrixXd members = cem ? cem->sample(population, algo_rng)
                                          : cmaes->ask(algo_rng);
      std::vector<int> lengths(population, 0);
      std::vector<double> returns(population, 0.0);
      parallel_for(population, opts.mode, [&](int i) {
        returns[i] = evaluate_params(*env, *policy, members.row(i).transpose(),
                                     cfg.horizon, seed, iter, i, &lengths[i]);
      });
      if (cem) {
        cem->update(members, returns);
        policy->params() = cem->mean();
      } else {
        cmaes->tell(members,
                    Eigen::Map<const Eigen::VectorXd>(returns.data(), population));
        policy->params() = cmaes->mean();
      }
      episode_returns = returns;
      for (int l : lengths) steps += l;
    } else {
      const auto trajs = collect_batch(*env, *policy, cfg.horizon,
                                       cfg.sim_steps_per_iter, seed, iter,
                                       opts.mode);
      const BatchSample batch = BatchSample::build(trajs, cfg.discount);
      const UpdateStats stats = batch_algo->update(batch, *policy);
      mean_kl = stats.mean_kl;
      episode_returns = batch.episode_returns;
      steps = batch.size();
    }

    const MetricsRow row = make_metrics_row(seed, iter, episode_returns,
                                            mean_kl, steps, ms_since(started));
    if (iter > last_done) append_metrics(metrics_path, {row});

    const bool checkpoint_now =
        !is_online && ((opts.checkpoint_every > 0 &&
                        (iter + 1) % opts.checkpoint_every == 0) ||
                       iter + 1 == cfg.num_iterations);
    if (checkpoint_now && iter > last_done)
      checkpoint_policy(*policy, dir, iter);
  }
}

}  // namespace

std::string seed_dir(const RunOptions& opts, const ExperimentConfig& config,
                     std::uint64_t seed) {
  return opts.out_dir + "/" + config.task_id() + "/" + config.algorithm +
         "/seed" + std::to_string(seed);
}

void run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  for (const auto seed : config.seeds) {
    if (!opts.quiet)
      std::cout << "[run] " << config.task_id() << "/" << config.algorithm
                << " seed " << seed << std::endl;
    run_seed(config, opts, seed);
  }
}

double seed_performance(const RunOptions& opts, const ExperimentConfig& config,
                        std::uint64_t seed) {
  return performance_from_rows(
      read_metrics(seed_dir(opts, config, seed) + "/metrics.csv"));
}

}  // namespace rlbench
