#include "rlbench/core/returns.hpp"

#include <stdexcept>

namespace rlbench {

std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("discounted_returns: gamma must be in (0, 1]");
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
    acc = rewards[t] + gamma * acc;
    out[t] = acc;
  }
  return out;
}

double performance_metric(
    const std::vector<std::vector<double>>& returns_per_iteration) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& iteration : returns_per_iteration) {
    for (double r : iteration) sum += r;
    count += iteration.size();
  }
  if (count == 0)
    throw std::invalid_argument("performance_metric: no trajectories");
  return sum / static_cast<double>(count);
}

}  // namespace rlbench
