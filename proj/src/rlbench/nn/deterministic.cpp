#include "rlbench/nn/deterministic.hpp"

#include <sstream>

namespace rlbench {

namespace {
std::vector<int> cat_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims = {in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}
std::vector<Act> relu_acts(std::size_t hidden_layers) {
  std::vector<Act> acts(hidden_layers, Act::kRelu);
  acts.push_back(Act::kLinear);
  return acts;
}
}  // namespace

DeterministicMlpPolicy::DeterministicMlpPolicy(
    int obs_dim, const Eigen::VectorXd& action_lower,
    const Eigen::VectorXd& action_upper, std::vector<int> hidden, Rng& rng)
    : obs_dim_(obs_dim),
      act_dim_(static_cast<int>(action_lower.size())),
      center_(0.5 * (action_lower + action_upper)),
      half_range_(0.5 * (action_upper - action_lower)),
      mlp_(cat_dims(obs_dim, hidden, act_dim_), relu_acts(hidden.size())),
      hidden_(std::move(hidden)) {
  mlp_.register_layout(layout_, "actor");
  theta_ = Eigen::VectorXd::Zero(layout_.total());
  mlp_.init_params(theta_, rng);
}

std::string DeterministicMlpPolicy::arch_descriptor() const {
  std::ostringstream os;
  os << "deterministic_mlp obs=" << obs_dim_ << " act=" << act_dim_ << " hidden=";
  for (std::size_t i = 0; i < hidden_.size(); ++i)
    os << (i ? "," : "") << hidden_[i];
  os << " lo=";
  for (int i = 0; i < act_dim_; ++i)
    os << (i ? "," : "") << center_[i] - half_range_[i];
  os << " hi=";
  for (int i = 0; i < act_dim_; ++i)
    os << (i ? "," : "") << center_[i] + half_range_[i];
  return os.str();
}

Eigen::VectorXd DeterministicMlpPolicy::action(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd z = mlp_.forward_one(theta_, obs);
  return center_ + (half_range_.array() * z.array().tanh()).matrix();
}

Eigen::MatrixXd DeterministicMlpPolicy::actions(const Eigen::MatrixXd& obs,
                                                Trace* trace) const {
  Mlp::Trace local;
  Mlp::Trace* mt = trace ? &trace->mlp : &local;
  const Eigen::MatrixXd z = mlp_.forward(theta_, obs, mt);
  Eigen::MatrixXd squashed = z.array().tanh().matrix();
  Eigen::MatrixXd a =
      (squashed.array().rowwise() * half_range_.transpose().array()).matrix();
  a.rowwise() += center_.transpose();
  if (trace) trace->squashed = std::move(squashed);
  return a;
}

void DeterministicMlpPolicy::backward(const Trace& trace,
                                      const Eigen::MatrixXd& d_actions,
                                      Eigen::Ref<Eigen::VectorXd> grad) const {
  const Eigen::MatrixXd dz =
      (d_actions.array() * (1.0 - trace.squashed.array().square()))
          .rowwise() *
      half_range_.transpose().array();
  mlp_.backward(theta_, trace.mlp, dz.matrix(), grad);
}

namespace {
class DeterministicSampler : public ActionSampler {
 public:
  explicit DeterministicSampler(const DeterministicMlpPolicy& p) : policy_(p) {}
  void reset() override {}
  Eigen::VectorXd act(const Eigen::VectorXd& obs, Rng&) override {
    return policy_.action(obs);
  }

 private:
  const DeterministicMlpPolicy& policy_;
};
}  // namespace

std::unique_ptr<ActionSampler> DeterministicMlpPolicy::make_sampler() const {
  return std::make_unique<DeterministicSampler>(*this);
}

std::unique_ptr<Policy> DeterministicMlpPolicy::clone() const {
  return std::make_unique<DeterministicMlpPolicy>(*this);
}

QFunction::QFunction(int obs_dim, int act_dim, std::vector<int> hidden, Rng& rng)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      mlp_(cat_dims(obs_dim + act_dim, hidden, 1), relu_acts(hidden.size())) {
  theta_ = Eigen::VectorXd::Zero(mlp_.num_params());
  mlp_.init_params(theta_, rng);
}

Eigen::VectorXd QFunction::values(const Eigen::MatrixXd& obs,
                                  const Eigen::MatrixXd& act,
                                  Mlp::Trace* trace) const {
  Eigen::MatrixXd input(obs.rows(), obs_dim_ + act_dim_);
  input << obs, act;
  return mlp_.forward(theta_, input, trace).col(0);
}

void QFunction::backward(const Mlp::Trace& trace, const Eigen::VectorXd& d_values,
                         Eigen::Ref<Eigen::VectorXd> grad,
                         Eigen::MatrixXd* d_actions) const {
  Eigen::MatrixXd d_input;
  mlp_.backward(theta_, trace, d_values, grad, d_actions ? &d_input : nullptr);
  if (d_actions) *d_actions = d_input.rightCols(act_dim_);
}

}  // namespace rlbench
