#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlbench/core/policy.hpp"
#include "rlbench/core/rng.hpp"

namespace rlbench {

enum class Act { kLinear, kTanh, kRelu };

// Fully-connected network over an externally owned flat parameter vector.
// Layer l maps n_{l-1} -> n_l with Z = A W^T + b; parameters are stored as
// [W1 (col-major), b1, W2, b2, ...] inside the flat segment. Rows of every
// matrix are samples. Reverse-mode (backward) and forward-mode (jvp) passes
// reuse the activations cached by forward in a Trace.
class Mlp {
 public:
  Mlp(std::vector<int> dims, std::vector<Act> activations);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int num_params() const { return num_params_; }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }

  void register_layout(FlatLayout& layout, const std::string& prefix) const;

  // uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases
  void init_params(Eigen::Ref<Eigen::VectorXd> theta, Rng& rng) const;

  struct Trace {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[L] = output
  };

  Eigen::MatrixXd forward(const Eigen::VectorXd& theta,
                          const Eigen::MatrixXd& input, Trace* trace) const;
  Eigen::VectorXd forward_one(const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& input) const;

  // accumulates d(sum L)/dtheta into grad given dL/doutput; optionally
  // returns dL/dinput
  void backward(const Eigen::VectorXd& theta, const Trace& trace,
                const Eigen::MatrixXd& d_output,
                Eigen::Ref<Eigen::VectorXd> grad,
                Eigen::MatrixXd* d_input = nullptr) const;

  // directional derivative of the outputs along d_theta (inputs held fixed)
  Eigen::MatrixXd jvp(const Eigen::VectorXd& theta, const Trace& trace,
                      const Eigen::VectorXd& d_theta) const;

 private:
  // maps into a flat vector for layer l; const and mutable views
  Eigen::Map<const Eigen::MatrixXd> weight(const Eigen::VectorXd& theta, int l) const;
  Eigen::Map<const Eigen::VectorXd> bias(const Eigen::VectorXd& theta, int l) const;
  Eigen::Map<Eigen::MatrixXd> weight(Eigen::Ref<Eigen::VectorXd> theta, int l) const;
  Eigen::Map<Eigen::VectorXd> bias(Eigen::Ref<Eigen::VectorXd> theta, int l) const;

  std::vector<int> dims_;
  std::vector<Act> acts_;  // one per layer; output layer is kLinear
  std::vector<int> w_offsets_;
  std::vector<int> b_offsets_;
  int num_params_ = 0;
};

}  // namespace rlbench
