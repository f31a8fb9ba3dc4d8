#pragma once

#include <vector>

namespace rlbench {

// Discounted suffix sums: out[t] = r[t] + gamma * out[t+1].
std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma);

// Mean undiscounted episode return pooled over all iterations; every
// trajectory weighs equally regardless of which iteration produced it.
double performance_metric(
    const std::vector<std::vector<double>>& returns_per_iteration);

}  // namespace rlbench
