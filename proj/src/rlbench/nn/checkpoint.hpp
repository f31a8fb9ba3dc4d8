#pragma once

#include <memory>
#include <string>

#include "rlbench/core/policy.hpp"

namespace rlbench {

// Policy checkpoint format, version 1. Three header lines of ASCII text
// followed by the raw parameter array:
//   rlbench-policy v1\n
//   <arch descriptor>\n        e.g. "gaussian_mlp obs=4 act=1 hidden=100,50,25"
//   params <count>\n
//   <count> IEEE-754 float64 values, little-endian, in layout order
void save_policy(const Policy& policy, const std::string& path);
std::unique_ptr<Policy> load_policy(const std::string& path);

// builds an uninitialized policy of the right shape from a descriptor line
std::unique_ptr<Policy> make_policy_from_descriptor(const std::string& descriptor);

}  // namespace rlbench
