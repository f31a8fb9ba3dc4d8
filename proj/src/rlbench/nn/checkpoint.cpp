#include "rlbench/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rlbench/nn/deterministic.hpp"
#include "rlbench/nn/lstm.hpp"
#include "rlbench/nn/policies.hpp"

namespace rlbench {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

std::map<std::string, std::string> parse_kv(std::istringstream& is) {
  std::map<std::string, std::string> kv;
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("checkpoint: malformed descriptor token " + token);
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
  return out;
}

Eigen::VectorXd parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stod(item));
  return Eigen::Map<Eigen::VectorXd>(out.data(), out.size());
}

}  // namespace

std::unique_ptr<Policy> make_policy_from_descriptor(const std::string& descriptor) {
  std::istringstream is(descriptor);
  std::string kind;
  is >> kind;
  auto kv = parse_kv(is);
  Rng rng(0, 0);  // parameters are overwritten by the caller
  if (kind == "gaussian_mlp")
    return std::make_unique<GaussianMlpPolicy>(std::stoi(kv.at("obs")),
                                               std::stoi(kv.at("act")),
                                               parse_int_list(kv.at("hidden")), rng);
  if (kind == "lstm_gaussian")
    return std::make_unique<LstmGaussianPolicy>(std::stoi(kv.at("obs")),
                                                std::stoi(kv.at("act")),
                                                std::stoi(kv.at("hidden")), rng);
  if (kind == "deterministic_mlp")
    return std::make_unique<DeterministicMlpPolicy>(
        std::stoi(kv.at("obs")), parse_double_list(kv.at("lo")),
        parse_double_list(kv.at("hi")), parse_int_list(kv.at("hidden")), rng);
  throw std::runtime_error("checkpoint: unknown policy kind " + kind);
}

void save_policy(const Policy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << "rlbench-policy v1\n" << policy.arch_descriptor() << "\n";
  const Eigen::VectorXd& theta = policy.params();
  out << "params " << theta.size() << "\n";
  out.write(reinterpret_cast<const char*>(theta.data()),
            static_cast<std::streamsize>(theta.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write on checkpoint " + path);
}

std::unique_ptr<Policy> load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  std::string magic, descriptor, params_line;
  std::getline(in, magic);
  if (magic != "rlbench-policy v1")
    throw std::runtime_error("unsupported checkpoint format in " + path);
  std::getline(in, descriptor);
  std::getline(in, params_line);
  std::istringstream ps(params_line);
  std::string word;
  long count = -1;
  ps >> word >> count;
  if (word != "params" || count < 0)
    throw std::runtime_error("malformed checkpoint header in " + path);

  auto policy = make_policy_from_descriptor(descriptor);
  if (policy->num_params() != count)
    throw std::runtime_error("checkpoint parameter count mismatch in " + path);
  in.read(reinterpret_cast<char*>(policy->params().data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
    throw std::runtime_error("truncated checkpoint " + path);
  return policy;
}

}  // namespace rlbench
