#include "rlbench/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rlbench/nn/lstm.hpp"
#include "rlbench/po/wrappers.hpp"
#include "rlbench/tasks/registry.hpp"

namespace rlbench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stoull(tok));
  return out;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {
      "reinforce", "tnpg", "rwr", "reps", "trpo", "cem", "cmaes", "ddpg"};
  return names;
}

std::string ExperimentConfig::task_id() const {
  std::string id = task;
  for (const auto& w : wrappers) {
    if (w == "limited_sensors") id += "_ls";
    else if (w == "noisy_delayed") id += "_no";
    else if (w == "sysid") id += "_si";
    else id += "_" + w;
  }
  return id;
}

void ExperimentConfig::validate() const {
  make_task(task);  // throws with the list of valid ids
  if (std::find(algorithm_names().begin(), algorithm_names().end(), algorithm) ==
      algorithm_names().end()) {
    std::ostringstream msg;
    msg << "unknown algorithm '" << algorithm << "'; valid algorithms:";
    for (const auto& a : algorithm_names()) msg << " " << a;
    throw std::invalid_argument(msg.str());
  }
  for (const auto& w : wrappers)
    if (w != "limited_sensors" && w != "noisy_delayed" && w != "sysid")
      throw std::invalid_argument(
          "unknown wrapper '" + w +
          "'; valid wrappers: limited_sensors noisy_delayed sysid");
  if (sim_steps_per_iter < 1 || num_iterations < 1 || horizon < 1)
    throw std::invalid_argument("protocol budgets must be positive");
  if (!(discount > 0.0 && discount <= 1.0))
    throw std::invalid_argument("discount must be in (0, 1]");
  if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
  const std::string pk = policy_kind();
  if (pk != "mlp" && pk != "lstm")
    throw std::invalid_argument("policy must be 'mlp' or 'lstm'");
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "task") {
      if (key == "name") cfg.task = value;
      else if (key == "wrappers") cfg.wrappers = split(value, ',');
      else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
      else if (key == "delay_frames") cfg.delay_frames = std::stoi(value);
      else if (key.rfind("physics.", 0) == 0)
        cfg.physics[key.substr(8)] = std::stod(value);
      else
        throw std::invalid_argument("unknown [task] key: " + key);
    } else if (section == "algorithm") {
      if (key == "name") cfg.algorithm = value;
      else if (key == "policy") cfg.policy = value;
      else if (key == "hidden") cfg.hidden = parse_ints(value);
      else cfg.hyper[key] = std::stod(value);
    } else if (section == "protocol") {
      if (key == "sim_steps_per_iter") cfg.sim_steps_per_iter = std::stoi(value);
      else if (key == "num_iterations") cfg.num_iterations = std::stoi(value);
      else if (key == "horizon") cfg.horizon = std::stoi(value);
      else if (key == "discount") cfg.discount = std::stod(value);
      else if (key == "seeds") cfg.seeds = parse_seeds(value);
      else throw std::invalid_argument("unknown [protocol] key: " + key);
    } else if (section == "grid") {
      if (key == "param") cfg.grid_param = value;
      else if (key == "values") cfg.grid_values = parse_doubles(value);
      else if (key == "log_range") {
        const auto parts = parse_doubles(value);
        if (parts.size() != 3 || parts[2] < 2)
          throw std::invalid_argument("log_range wants lo,hi,count");
        cfg.grid_values.clear();
        const int count = static_cast<int>(parts[2]);
        for (int i = 0; i < count; ++i)
          cfg.grid_values.push_back(
              std::exp(std::log(parts[0]) +
                       (std::log(parts[1]) - std::log(parts[0])) * i /
                           (count - 1)));
      } else {
        throw std::invalid_argument("unknown [grid] key: " + key);
      }
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any known section");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

std::unique_ptr<Env> build_env(const ExperimentConfig& config) {
  std::unique_ptr<Env> env = make_task(config.task);
  for (const auto& [key, value] : config.physics) env->set_param(key, value);
  for (const auto& w : config.wrappers) {
    if (w == "limited_sensors") {
      env = std::make_unique<LimitedSensorsEnv>(std::move(env));
    } else if (w == "noisy_delayed") {
      env = std::make_unique<NoisyDelayedEnv>(std::move(env), config.noise_sigma,
                                              config.delay_frames);
    } else if (w == "sysid") {
      env = std::make_unique<SysIdEnv>(std::move(env),
                                       default_sysid_ranges(config.task));
    }
  }
  return env;
}

std::unique_ptr<StochasticPolicy> build_stochastic_policy(
    const ExperimentConfig& config, const EnvSpec& spec, std::uint64_t seed) {
  Rng rng(seed, stream_id(StreamTag::kPolicyInit, 0, 0));
  if (config.policy_kind() == "lstm") {
    const int hidden = config.hidden.empty() ? LstmGaussianPolicy::kDefaultHidden
                                             : config.hidden.front();
    return std::make_unique<LstmGaussianPolicy>(spec.observation_dim,
                                                spec.action_dim, hidden, rng);
  }
  const std::vector<int> hidden =
      config.hidden.empty() ? GaussianMlpPolicy::default_hidden() : config.hidden;
  return std::make_unique<GaussianMlpPolicy>(spec.observation_dim,
                                             spec.action_dim, hidden, rng);
}

namespace {

// Best-known values per (algorithm, task); grid-searched tasks carry the
// searched optima, the rest fall back to the algorithm-level defaults.
double default_hyper(const std::string& algo, const std::string& task,
                     const std::string& name) {
  if (algo == "reinforce") {
    if (name == "learning_rate") {
      if (task == "cartpole_swingup") return 5e-3;
      if (task == "double_pendulum") return 5e-3;
      return 5e-3;
    }
  } else if (algo == "tnpg") {
    if (name == "step_size") {
      if (task == "cartpole_swingup") return 5e-2;
      if (task == "double_pendulum") return 3e-2;
      return 5e-2;
    }
    if (name == "cg_iters") return 10;
  } else if (algo == "trpo") {
    if (name == "step_size") {
      if (task == "cartpole_swingup") return 5e-2;
      if (task == "double_pendulum") return 1e-3;
      return 5e-2;
    }
    if (name == "cg_iters") return 10;
    if (name == "backtrack_ratio") return 0.8;
    if (name == "max_backtracks") return 15;
  } else if (algo == "rwr") {
    if (name == "inner_steps") return 10;
    if (name == "inner_lr") return 1e-2;
  } else if (algo == "reps") {
    if (name == "step_size") {
      if (task == "cartpole_swingup") return 1e-2;
      if (task == "double_pendulum") return 8e-1;
      return 1e-2;
    }
    if (name == "dual_grad_tol") return 1e-5;
    if (name == "dual_max_iters") return 500;
    if (name == "ml_steps") return 10;
    if (name == "ml_lr") return 1e-2;
  } else if (algo == "cem") {
    if (name == "elite_frac") return 0.2;
    if (name == "init_std") return 1.0;
    if (name == "extra_noise") {
      if (task == "cartpole_swingup") return 1e-2;
      return 1e-1;
    }
  } else if (algo == "cmaes") {
    if (name == "sigma0") {
      if (task == "cartpole_swingup") return 1e3;
      return 3e-1;
    }
  } else if (algo == "ddpg") {
    if (name == "batch_size") return 64;
    if (name == "actor_lr") return 1e-4;
    if (name == "critic_lr") return 1e-3;
    if (name == "critic_weight_decay") return 1e-2;
    if (name == "tau") return 1e-3;
    if (name == "ou_rate") return 0.15;
    if (name == "ou_sigma") return 0.2;
    if (name == "warmup_steps") return 10000;
    if (name == "reward_scale") return 0.1;
    if (name == "replay_capacity") return 1000000;
  }
  throw std::invalid_argument("no default for hyperparameter '" + name +
                              "' of algorithm " + algo);
}

}  // namespace

bool has_hyperparameter(const ExperimentConfig& config, const std::string& name) {
  return config.hyper.count(name) > 0;
}

double hyperparameter(const ExperimentConfig& config, const std::string& name) {
  const auto it = config.hyper.find(name);
  if (it != config.hyper.end()) return it->second;
  return default_hyper(config.algorithm, config.task, name);
}

}  // namespace rlbench
