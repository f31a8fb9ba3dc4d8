#include "rlbench/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rlbench {

const char* kMetricsHeader =
    "seed,iteration,episodes,mean_return,std_return,min_return,max_return,"
    "mean_kl,steps,wall_ms";

namespace {
std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

std::string format_metrics_row(const MetricsRow& r) {
  std::ostringstream os;
  os << r.seed << ',' << r.iteration << ',' << r.episodes << ','
     << g6(r.mean_return) << ',' << g6(r.std_return) << ',' << g6(r.min_return)
     << ',' << g6(r.max_return) << ',' << g6(r.mean_kl) << ',' << r.steps << ','
     << r.wall_ms;
  return os.str();
}

MetricsRow make_metrics_row(std::uint64_t seed, int iteration,
                            const std::vector<double>& episode_returns,
                            double mean_kl, long steps, long wall_ms) {
  MetricsRow r;
  r.seed = seed;
  r.iteration = iteration;
  r.episodes = static_cast<int>(episode_returns.size());
  r.mean_kl = mean_kl;
  r.steps = steps;
  r.wall_ms = wall_ms;
  if (!episode_returns.empty()) {
    double sum = 0.0;
    r.min_return = r.max_return = episode_returns.front();
    for (double x : episode_returns) {
      sum += x;
      r.min_return = std::min(r.min_return, x);
      r.max_return = std::max(r.max_return, x);
    }
    r.mean_return = sum / episode_returns.size();
    double sq = 0.0;
    for (double x : episode_returns)
      sq += (x - r.mean_return) * (x - r.mean_return);
    r.std_return = std::sqrt(sq / episode_returns.size());
  } else {
    const double nan = std::nan("");
    r.mean_return = r.std_return = r.min_return = r.max_return = nan;
  }
  return r;
}

std::vector<MetricsRow> read_metrics(const std::string& path) {
  std::vector<MetricsRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != kMetricsHeader)
    throw std::runtime_error("metrics file " + path + " has a foreign header");
  while (std::getline(in, line)) {
    // split into exactly ten fields; stod/stoll accept "nan" where streams
    // do not. A malformed line (torn append) ends the read.
    std::vector<std::string> fields;
    std::istringstream is(line);
    std::string field;
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (fields.size() != 10) break;
    try {
      MetricsRow r;
      r.seed = std::stoull(fields[0]);
      r.iteration = std::stoi(fields[1]);
      r.episodes = std::stoi(fields[2]);
      r.mean_return = std::stod(fields[3]);
      r.std_return = std::stod(fields[4]);
      r.min_return = std::stod(fields[5]);
      r.max_return = std::stod(fields[6]);
      r.mean_kl = std::stod(fields[7]);
      r.steps = std::stol(fields[8]);
      r.wall_ms = std::stol(fields[9]);
      rows.push_back(r);
    } catch (const std::exception&) {
      break;
    }
  }
  return rows;
}

std::vector<MetricsRow> repair_metrics(const std::string& path) {
  const auto rows = read_metrics(path);
  if (!std::filesystem::exists(path)) return rows;
  long physical_lines = 0;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) ++physical_lines;
  }
  if (physical_lines == static_cast<long>(rows.size()) + 1) return rows;
  const std::string tmp = path + ".repair";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << kMetricsHeader << '\n';
    for (const auto& r : rows) out << format_metrics_row(r) << '\n';
    if (!out) throw std::runtime_error("cannot repair metrics file " + path);
  }
  std::filesystem::rename(tmp, path);
  return rows;
}

void append_metrics(const std::string& path, const std::vector<MetricsRow>& rows) {
  const bool fresh =
      !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to metrics file " + path);
  if (fresh) out << kMetricsHeader << '\n';
  for (const auto& r : rows) out << format_metrics_row(r) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("short write on metrics file " + path);
}

double performance_from_rows(const std::vector<MetricsRow>& rows) {
  double weighted = 0.0;
  long episodes = 0;
  for (const auto& r : rows) {
    if (r.episodes <= 0 || !std::isfinite(r.mean_return)) continue;
    weighted += r.mean_return * r.episodes;
    episodes += r.episodes;
  }
  if (episodes == 0)
    throw std::invalid_argument("performance_from_rows: no episodes recorded");
  return weighted / episodes;
}

}  // namespace rlbench
