#include "rlbench/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace rlbench {

namespace {

Eigen::MatrixXd apply_act(Act a, Eigen::MatrixXd z) {
  switch (a) {
    case Act::kLinear: return z;
    case Act::kTanh: return z.array().tanh().matrix();
    case Act::kRelu: return z.cwiseMax(0.0);
  }
  return z;
}

// derivative expressed through the post-activation value
Eigen::ArrayXXd act_deriv(Act a, const Eigen::MatrixXd& post) {
  switch (a) {
    case Act::kLinear: return Eigen::ArrayXXd::Ones(post.rows(), post.cols());
    case Act::kTanh: return 1.0 - post.array().square();
    case Act::kRelu: return (post.array() > 0.0).cast<double>();
  }
  return Eigen::ArrayXXd::Ones(post.rows(), post.cols());
}

}  // namespace

Mlp::Mlp(std::vector<int> dims, std::vector<Act> activations)
    : dims_(std::move(dims)), acts_(std::move(activations)) {
  if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least one layer");
  if (acts_.size() != dims_.size() - 1)
    throw std::invalid_argument("Mlp: one activation per layer required");
  for (int d : dims_)
    if (d <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  int offset = 0;
  for (int l = 0; l < num_layers(); ++l) {
    w_offsets_.push_back(offset);
    offset += dims_[l + 1] * dims_[l];
    b_offsets_.push_back(offset);
    offset += dims_[l + 1];
  }
  num_params_ = offset;
}

void Mlp::register_layout(FlatLayout& layout, const std::string& prefix) const {
  for (int l = 0; l < num_layers(); ++l) {
    layout.add(prefix + ".w" + std::to_string(l), dims_[l + 1] * dims_[l]);
    layout.add(prefix + ".b" + std::to_string(l), dims_[l + 1]);
  }
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weight(const Eigen::VectorXd& theta,
                                              int l) const {
  return {theta.data() + w_offsets_[l], dims_[l + 1], dims_[l]};
}
Eigen::Map<const Eigen::VectorXd> Mlp::bias(const Eigen::VectorXd& theta,
                                            int l) const {
  return {theta.data() + b_offsets_[l], dims_[l + 1]};
}
Eigen::Map<Eigen::MatrixXd> Mlp::weight(Eigen::Ref<Eigen::VectorXd> theta,
                                        int l) const {
  return {theta.data() + w_offsets_[l], dims_[l + 1], dims_[l]};
}
Eigen::Map<Eigen::VectorXd> Mlp::bias(Eigen::Ref<Eigen::VectorXd> theta,
                                      int l) const {
  return {theta.data() + b_offsets_[l], dims_[l + 1]};
}

void Mlp::init_params(Eigen::Ref<Eigen::VectorXd> theta, Rng& rng) const {
  if (theta.size() < num_params_)
    throw std::invalid_argument("Mlp::init_params: segment too small");
  for (int l = 0; l < num_layers(); ++l) {
    const double bound = std::sqrt(6.0 / (dims_[l] + dims_[l + 1]));
    auto w = weight(theta, l);
    for (int j = 0; j < w.cols(); ++j)
      for (int i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
    bias(theta, l).setZero();
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::VectorXd& theta,
                             const Eigen::MatrixXd& input, Trace* trace) const {
  if (input.cols() != input_dim())
    throw std::invalid_argument("Mlp::forward: input dimension mismatch");
  Eigen::MatrixXd a = input;
  if (trace) {
    trace->acts.clear();
    trace->acts.push_back(a);
  }
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = a * weight(theta, l).transpose();
    z.rowwise() += bias(theta, l).transpose();
    a = apply_act(acts_[l], std::move(z));
    if (trace) trace->acts.push_back(a);
  }
  return a;
}

Eigen::VectorXd Mlp::forward_one(const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& input) const {
  Eigen::VectorXd a = input;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::VectorXd z = weight(theta, l) * a + bias(theta, l);
    switch (acts_[l]) {
      case Act::kLinear: a = std::move(z); break;
      case Act::kTanh: a = z.array().tanh().matrix(); break;
      case Act::kRelu: a = z.cwiseMax(0.0); break;
    }
  }
  return a;
}

void Mlp::backward(const Eigen::VectorXd& theta, const Trace& trace,
                   const Eigen::MatrixXd& d_output,
                   Eigen::Ref<Eigen::VectorXd> grad,
                   Eigen::MatrixXd* d_input) const {
  Eigen::MatrixXd da = d_output;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Eigen::MatrixXd dz =
        (da.array() * act_deriv(acts_[l], trace.acts[l + 1])).matrix();
    weight(grad, l) += dz.transpose() * trace.acts[l];
    bias(grad, l) += dz.colwise().sum().transpose();
    if (l > 0 || d_input) da = dz * weight(theta, l);
  }
  if (d_input) *d_input = std::move(da);
}

Eigen::MatrixXd Mlp::jvp(const Eigen::VectorXd& theta, const Trace& trace,
                         const Eigen::VectorXd& d_theta) const {
  Eigen::MatrixXd da =
      Eigen::MatrixXd::Zero(trace.acts[0].rows(), input_dim());
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd dz = da * weight(theta, l).transpose() +
                         trace.acts[l] * weight(d_theta, l).transpose();
    dz.rowwise() += bias(d_theta, l).transpose();
    da = (dz.array() * act_deriv(acts_[l], trace.acts[l + 1])).matrix();
  }
  return da;
}

}  // namespace rlbench
