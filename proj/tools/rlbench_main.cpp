#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rlbench/checks/acceptance.hpp"
#include "rlbench/harness/experiment.hpp"
#include "rlbench/harness/grid.hpp"
#include "rlbench/harness/table.hpp"

using namespace rlbench;

namespace {

ExperimentConfig load_config(const std::string& path, int seeds_override,
                             int iters_override) {
  ExperimentConfig cfg = ExperimentConfig::parse_file(path);
  if (seeds_override > 0) {
    cfg.seeds.clear();
    for (int i = 0; i < seeds_override; ++i) cfg.seeds.push_back(i);
  }
  if (iters_override > 0) cfg.num_iterations = iters_override;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-control benchmark runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "results", table_out;
  int seeds = 0, iters = 0, jobs = 0, checkpoint_every = 0;
  bool serial = false;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "results directory");
    cmd->add_option("--seeds", seeds, "run seeds 0..N-1 instead of the config list");
    cmd->add_option("--iters", iters, "override the iteration count");
    cmd->add_option("--jobs", jobs, "worker threads (default: hardware)");
    cmd->add_option("--checkpoint-every", checkpoint_every,
                    "checkpoint cadence in iterations (0: final only)");
    cmd->add_flag("--serial", serial, "use the serial reference sampler");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_run_flags(run_cmd);
  CLI::App* grid_cmd =
      app.add_subcommand("grid", "grid-search the configured hyperparameter");
  add_run_flags(grid_cmd);

  CLI::App* table_cmd =
      app.add_subcommand("table", "aggregate results into a comparison table");
  std::string results_dir;
  table_cmd->add_option("results", results_dir, "results directory")->required();
  table_cmd->add_option("--out", table_out, "also write the table as CSV here");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "run the acceptance/invariant self-test suite");
  std::string check_dir = "check_results";
  check_cmd->add_option("--out", check_dir, "scratch directory for check runs");
  check_cmd->add_option("--jobs", jobs, "worker threads (default: hardware)");

  CLI11_PARSE(app, argc, argv);

  if (jobs > 0) set_num_threads(jobs);

  try {
    if (*run_cmd || *grid_cmd) {
      const ExperimentConfig cfg = load_config(config_path, seeds, iters);
      RunOptions opts;
      opts.out_dir = out_dir;
      opts.mode = serial ? ExecMode::kSerial : ExecMode::kOpenMp;
      opts.checkpoint_every = checkpoint_every;
      if (*run_cmd) {
        run_experiment(cfg, opts);
        for (const auto seed : cfg.seeds)
          std::cout << "seed " << seed << " performance "
                    << seed_performance(opts, cfg, seed) << "\n";
      } else {
        const GridResult result = run_grid_search(cfg, opts);
        for (std::size_t i = 0; i < cfg.grid_values.size(); ++i)
          std::cout << cfg.grid_param << " = " << cfg.grid_values[i]
                    << "  criterion " << result.scores[i]
                    << (static_cast<int>(i) == result.best_index ? "  <- best"
                                                                 : "")
                    << "\n";
        std::cout << "best " << cfg.grid_param << " = " << result.best_value
                  << "\n";
      }
    } else if (*table_cmd) {
      const ComparisonTable table = build_table(results_dir);
      std::cout << table.render_text();
      if (!table_out.empty()) {
        std::ofstream out(table_out);
        out << table.render_csv();
        std::cout << "wrote " << table_out << "\n";
      }
    } else if (*check_cmd) {
      std::filesystem::create_directories(check_dir);
      const auto results = run_acceptance_checks(std::cout, check_dir);
      int failures = 0;
      for (const auto& r : results) failures += r.passed ? 0 : 1;
      return failures;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
