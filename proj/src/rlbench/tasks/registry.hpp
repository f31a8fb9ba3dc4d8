#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlbench/core/env.hpp"

namespace rlbench {

// Multiplicative per-episode randomization range for one physics parameter.
struct ParamRange {
  std::string name;
  double low = 1.0;
  double high = 1.0;
};

// All basic task ids, in table order.
const std::vector<std::string>& task_names();

// Builds a basic task by id; throws listing valid ids on an unknown name.
std::unique_ptr<Env> make_task(const std::string& name);

// Default system-identification ranges for a task's randomized parameters.
std::vector<ParamRange> default_sysid_ranges(const std::string& task_name);

}  // namespace rlbench
