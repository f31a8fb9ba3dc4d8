#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlbench/core/rng.hpp"

namespace rlbench {

// Named slices mapping network weights/biases/log-std into one flat vector.
struct FlatLayout {
  struct Slice {
    std::string name;
    int offset = 0;
    int size = 0;
  };
  std::vector<Slice> slices;

  int total() const {
    int n = 0;
    for (const auto& s : slices) n += s.size;
    return n;
  }

  int add(const std::string& name, int size) {
    const int offset = total();
    slices.push_back({name, offset, size});
    return offset;
  }

  const Slice& find(const std::string& name) const {
    for (const auto& s : slices)
      if (s.name == name) return s;
    throw std::invalid_argument("FlatLayout: no slice named " + name);
  }
};

// Per-episode actor; holds recurrent state where the policy has any.
class ActionSampler {
 public:
  virtual ~ActionSampler() = default;
  virtual void reset() = 0;
  virtual Eigen::VectorXd act(const Eigen::VectorXd& observation, Rng& rng) = 0;
};

// Parameterized policy with a flat parameter view; value-like and cloneable.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int obs_dim() const = 0;
  virtual int act_dim() const = 0;
  virtual Eigen::VectorXd& params() = 0;
  virtual const Eigen::VectorXd& params() const = 0;
  virtual const FlatLayout& layout() const = 0;
  virtual std::string arch_descriptor() const = 0;
  virtual std::unique_ptr<ActionSampler> make_sampler() const = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;

  int num_params() const { return static_cast<int>(params().size()); }
};

}  // namespace rlbench
