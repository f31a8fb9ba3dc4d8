#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "rlbench/harness/experiment.hpp"
#include "rlbench/harness/grid.hpp"
#include "rlbench/harness/stats.hpp"
#include "rlbench/harness/table.hpp"

using namespace rlbench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// strips the wall_ms column (the only timing-dependent field)
std::string without_wall_ms(const std::string& csv_path) {
  std::ifstream in(csv_path);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    out += line.substr(0, last_comma);
    out += '\n';
  }
  return out;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.task = "acrobot";  // never terminates: deterministic episode lengths
  cfg.algorithm = "reinforce";
  cfg.sim_steps_per_iter = 200;
  cfg.num_iterations = 3;
  cfg.horizon = 100;
  cfg.seeds = {0, 1};
  cfg.hidden = {8};
  return cfg;
}

}  // namespace

TEST_CASE("welch t-test") {
  SUBCASE("identical samples: t = 0, p = 1") {
    const std::vector<double> a = {1, 2, 3, 4};
    const auto r = welch_t_test(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0));
  }
  SUBCASE("symmetry in the arguments") {
    const std::vector<double> a = {1.2, 0.7, 3.3, 2.2};
    const std::vector<double> b = {0.1, 0.4, -1.0, 2.0, 0.5};
    CHECK(welch_t_test(a, b).p == doctest::Approx(welch_t_test(b, a).p));
    CHECK(welch_t_test(a, b).t == doctest::Approx(-welch_t_test(b, a).t));
  }
  SUBCASE("textbook pair against the quadrature oracle") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const auto r = welch_t_test(a, b);
    CHECK(std::abs(r.t - (-1.0)) < 1e-12);  // means differ by 1, se = 1
    CHECK(r.dof == doctest::Approx(8.0));
    CHECK(std::abs(r.p - oracle::t_two_sided_p(r.t, r.dof)) < 1e-9);
  }
  SUBCASE("100 random pairs match the oracle within 1e-9") {
    Rng rng(3, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const int na = 2 + static_cast<int>(rng.uniform_index(8));
      const int nb = 2 + static_cast<int>(rng.uniform_index(8));
      std::vector<double> a(na), b(nb);
      for (auto& x : a) x = rng.normal(0.0, 2.0);
      for (auto& x : b) x = rng.normal(0.5, 1.5);
      const auto r = welch_t_test(a, b);
      CHECK(std::abs(r.p - oracle::t_two_sided_p(r.t, r.dof)) < 1e-9);
    }
  }
  SUBCASE("degenerate zero-variance conventions") {
    const std::vector<double> same = {2, 2, 2};
    CHECK(welch_t_test(same, same).p == 1.0);
    const std::vector<double> other = {3, 3, 3};
    CHECK(welch_t_test(same, other).p == 0.0);
    CHECK_THROWS_AS(welch_t_test({1.0}, same), std::invalid_argument);
  }
}

TEST_CASE("grid selection criterion") {
  SUBCASE("mean-minus-std beats a risky point with equal mean") {
    // A: five fives (score 5); B: mean 5, population std 8 (score -3)
    const std::vector<std::vector<double>> grid = {
        {5, 5, 5, 5, 5}, {9, 9, 9, 9, -11}};
    CHECK(grid_select(grid) == 0);
    CHECK(population_std(grid[1]) == doctest::Approx(8.0));
  }
  SUBCASE("exact ties go to the lower index") {
    CHECK(grid_select({{1, 1}, {1, 1}, {2, 0}}) == 0);
  }
  SUBCASE("single point returns trivially") {
    CHECK(grid_select({{0.3, 0.4}}) == 0);
  }
}

TEST_CASE("config parsing") {
  const std::string text = R"(
# comment
[task]
name = cartpole_swingup
wrappers = limited_sensors, noisy_delayed
noise_sigma = 0.2
delay_frames = 2
physics.pole_length = 0.8

[algorithm]
name = trpo
step_size = 0.01
policy = lstm

[protocol]
sim_steps_per_iter = 1000
num_iterations = 7
horizon = 50
discount = 0.95
seeds = 3, 5, 8

[grid]
param = step_size
log_range = 0.001, 1.0, 4
)";
  const auto cfg = ExperimentConfig::parse_text(text);
  CHECK(cfg.task == "cartpole_swingup");
  CHECK(cfg.wrappers == std::vector<std::string>{"limited_sensors", "noisy_delayed"});
  CHECK(cfg.noise_sigma == 0.2);
  CHECK(cfg.physics.at("pole_length") == 0.8);
  CHECK(cfg.algorithm == "trpo");
  CHECK(hyperparameter(cfg, "step_size") == 0.01);
  CHECK(hyperparameter(cfg, "cg_iters") == 10);  // default fills in
  CHECK(cfg.policy_kind() == "lstm");
  CHECK(cfg.num_iterations == 7);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 5, 8});
  REQUIRE(cfg.grid_values.size() == 4);
  CHECK(cfg.grid_values.front() == doctest::Approx(0.001));
  CHECK(cfg.grid_values.back() == doctest::Approx(1.0));
  CHECK(cfg.task_id() == "cartpole_swingup_ls_no");

  SUBCASE("unknown ids fail with the list of valid ones") {
    ExperimentConfig bad = cfg;
    bad.task = "walker";
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("valid tasks"),
                         std::invalid_argument);
    bad = cfg;
    bad.algorithm = "sac";
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("valid algorithms"),
                         std::invalid_argument);
  }
  SUBCASE("default policy kind follows the task category") {
    ExperimentConfig c;
    CHECK(c.policy_kind() == "mlp");
    c.wrappers = {"limited_sensors"};
    CHECK(c.policy_kind() == "lstm");
  }
}

TEST_CASE("metrics csv round trip and resilience") {
  TempDir dir("rlbench_metrics_test");
  const std::string path = (dir.path / "metrics.csv").string();

  MetricsRow row = make_metrics_row(7, 0, {1.0, 2.0, 3.0}, std::nan(""), 30, 12);
  CHECK(row.mean_return == doctest::Approx(2.0));
  CHECK(row.min_return == 1.0);
  CHECK(row.max_return == 3.0);
  append_metrics(path, {row});
  append_metrics(path, {make_metrics_row(7, 1, {4.0}, 0.01, 10, 5)});

  auto rows = read_metrics(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].episodes == 3);
  CHECK(std::isnan(rows[0].mean_kl));
  CHECK(rows[1].mean_kl == doctest::Approx(0.01));
  // pooled performance: (1+2+3+4)/4
  CHECK(performance_from_rows(rows) == doctest::Approx(2.5));

  SUBCASE("torn trailing line is dropped") {
    std::ofstream out(path, std::ios::app);
    out << "7,2,1,5.0,0.0,5.0";  // interrupted mid-row
    out.close();
    CHECK(read_metrics(path).size() == 2);
  }
  SUBCASE("foreign header is rejected") {
    const std::string other = (dir.path / "other.csv").string();
    std::ofstream out(other);
    out << "a,b,c\n1,2,3\n";
    out.close();
    CHECK_THROWS(read_metrics(other));
  }
}

TEST_CASE("run_experiment: budgets, determinism, resume") {
  TempDir dir("rlbench_run_test");

  SUBCASE("exactly one episode per iteration when budget equals horizon") {
    ExperimentConfig cfg = tiny_config();
    cfg.sim_steps_per_iter = 100;  // == horizon, acrobot never terminates
    cfg.seeds = {0};
    RunOptions opts;
    opts.out_dir = (dir.path / "a").string();
    opts.quiet = true;
    run_experiment(cfg, opts);
    const auto rows = read_metrics(seed_dir(opts, cfg, 0) + "/metrics.csv");
    REQUIRE(static_cast<int>(rows.size()) == cfg.num_iterations);
    for (const auto& r : rows) {
      CHECK(r.episodes == 1);
      CHECK(r.steps == 100);
    }
  }
  SUBCASE("two runs produce identical CSVs apart from wall time") {
    ExperimentConfig cfg = tiny_config();
    RunOptions o1, o2;
    o1.out_dir = (dir.path / "r1").string();
    o2.out_dir = (dir.path / "r2").string();
    o1.quiet = o2.quiet = true;
    o2.mode = ExecMode::kSerial;  // thread count must not matter either
    run_experiment(cfg, o1);
    run_experiment(cfg, o2);
    for (const auto seed : cfg.seeds) {
      const std::string a = seed_dir(o1, cfg, seed) + "/metrics.csv";
      const std::string b = seed_dir(o2, cfg, seed) + "/metrics.csv";
      CHECK(without_wall_ms(a) == without_wall_ms(b));
    }
    // 2 seeds x 3 iterations -> 6 rows in total
    std::size_t rows = 0;
    for (const auto seed : cfg.seeds)
      rows += read_metrics(seed_dir(o1, cfg, seed) + "/metrics.csv").size();
    CHECK(rows == 6);
  }
  SUBCASE("resume completes interrupted runs without rewriting") {
    ExperimentConfig cfg = tiny_config();
    cfg.seeds = {0};
    RunOptions full, partial;
    full.out_dir = (dir.path / "full").string();
    partial.out_dir = (dir.path / "partial").string();
    full.quiet = partial.quiet = true;
    run_experiment(cfg, full);

    // simulate a crash: run, then truncate the metrics to the first row
    run_experiment(cfg, partial);
    const std::string pcsv = seed_dir(partial, cfg, 0) + "/metrics.csv";
    const auto all_rows = read_metrics(pcsv);
    REQUIRE(all_rows.size() == 3);
    {
      std::ofstream out(pcsv, std::ios::trunc);
      out << kMetricsHeader << '\n' << format_metrics_row(all_rows[0]) << '\n';
      out << "0,1,1,17.3";  // torn line from the crash
    }
    run_experiment(cfg, partial);  // resume
    CHECK(without_wall_ms(pcsv) ==
          without_wall_ms(seed_dir(full, cfg, 0) + "/metrics.csv"));

    // idempotent rerun: completed files are untouched (same mtime content)
    const auto before = without_wall_ms(pcsv);
    run_experiment(cfg, partial);
    CHECK(without_wall_ms(pcsv) == before);
  }
}

TEST_CASE("comparison table") {
  TempDir dir("rlbench_table_test");
  auto write_seed = [&](const std::string& task, const std::string& algo,
                        int seed, double value) {
    const fs::path d = dir.path / task / algo / ("seed" + std::to_string(seed));
    fs::create_directories(d);
    append_metrics((d / "metrics.csv").string(),
                   {make_metrics_row(seed, 0, {value}, std::nan(""), 10, 1)});
  };

  // task A: two clearly separated algorithms -> only the best is bold
  for (int s = 0; s < 5; ++s) {
    write_seed("taskA", "algo1", s, 100.0 + 0.1 * s);
    write_seed("taskA", "algo2", s, 0.0 + 0.1 * s);
  }
  // task B: identical results -> both bold
  for (int s = 0; s < 5; ++s) {
    write_seed("taskB", "algo1", s, 10.0 + s);
    write_seed("taskB", "algo2", s, 10.0 + s);
  }
  // task C: a single algorithm -> trivially bold
  for (int s = 0; s < 5; ++s) write_seed("taskC", "algo1", s, 1.0 + s);

  const auto table = build_table(dir.path.string());
  CHECK(table.cells.at("taskA").at("algo1").bold);
  CHECK(!table.cells.at("taskA").at("algo2").bold);
  CHECK(table.cells.at("taskB").at("algo1").bold);
  CHECK(table.cells.at("taskB").at("algo2").bold);
  CHECK(table.cells.at("taskC").at("algo1").bold);
  CHECK(table.cells.at("taskC").count("algo2") == 0);

  const std::string text = table.render_text();
  CHECK(text.find("N/A") != std::string::npos);  // missing cell rendered
  const std::string csv = table.render_csv();
  CHECK(csv.find("taskA,algo1") != std::string::npos);

  // table values equal the metric recomputed from the raw rows
  const auto rows =
      read_metrics((dir.path / "taskA/algo1/seed0/metrics.csv").string());
  CHECK(table.cells.at("taskA").at("algo1").seed_performances[0] ==
        doctest::Approx(performance_from_rows(rows)));
}
