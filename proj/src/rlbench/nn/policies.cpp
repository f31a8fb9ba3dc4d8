#include "rlbench/nn/policies.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rlbench {

TrajBatch TrajBatch::from_trajectories(const std::vector<Trajectory>& trajs) {
  TrajBatch batch;
  int n = 0;
  for (const auto& t : trajs) n += t.length();
  if (n == 0) throw std::invalid_argument("TrajBatch: empty batch");
  const int obs_dim = static_cast<int>(trajs.front().observations.front().size());
  const int act_dim = static_cast<int>(trajs.front().actions.front().size());
  batch.observations.resize(n, obs_dim);
  batch.actions.resize(n, act_dim);
  batch.offsets.push_back(0);
  int row = 0;
  for (const auto& t : trajs) {
    for (int i = 0; i < t.length(); ++i) {
      batch.observations.row(row) = t.observations[i].transpose();
      batch.actions.row(row) = t.actions[i].transpose();
      ++row;
    }
    batch.offsets.push_back(row);
  }
  return batch;
}

double gaussian_log_prob(const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std,
                         const Eigen::VectorXd& action) {
  const int d = static_cast<int>(mean.size());
  double lp = -0.5 * d * std::log(2.0 * M_PI) - log_std.sum();
  for (int i = 0; i < d; ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp -= 0.5 * z * z;
  }
  return lp;
}

double diag_gaussian_kl(const Eigen::VectorXd& m0, const Eigen::VectorXd& s0,
                        const Eigen::VectorXd& m1, const Eigen::VectorXd& s1) {
  double kl = 0.0;
  for (int i = 0; i < m0.size(); ++i) {
    const double var0 = std::exp(2.0 * s0[i]);
    const double var1 = std::exp(2.0 * s1[i]);
    const double dm = m1[i] - m0[i];
    kl += s1[i] - s0[i] + 0.5 * (var0 + dm * dm) / var1 - 0.5;
  }
  return kl;
}

Eigen::VectorXd StochasticPolicy::log_probs(const TrajBatch& batch) const {
  const GaussianDist d = dist(batch);
  const int n = batch.size();
  const Eigen::ArrayXd inv_var = (-2.0 * d.log_std.array()).exp();
  const double base =
      -0.5 * act_dim() * std::log(2.0 * M_PI) - d.log_std.sum();
  Eigen::VectorXd lp(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::ArrayXd delta =
        (batch.actions.row(i) - d.means.row(i)).transpose().array();
    lp[i] = base - 0.5 * (delta.square() * inv_var).sum();
  }
  return lp;
}

double StochasticPolicy::mean_kl_from(const GaussianDist& old_dist,
                                      const TrajBatch& batch) const {
  const GaussianDist cur = dist(batch);
  double total = 0.0;
  for (int i = 0; i < batch.size(); ++i)
    total += diag_gaussian_kl(old_dist.means.row(i).transpose(),
                              old_dist.log_std, cur.means.row(i).transpose(),
                              cur.log_std);
  return total / batch.size();
}

double log_prob(const StochasticPolicy& policy, const Eigen::VectorXd& obs,
                const Eigen::VectorXd& action) {
  if (!obs.allFinite() || !action.allFinite())
    throw std::invalid_argument("log_prob: non-finite inputs");
  TrajBatch batch;
  batch.observations = obs.transpose();
  batch.actions = action.transpose();
  batch.offsets = {0, 1};
  return policy.log_probs(batch)[0];
}

double mean_kl(StochasticPolicy& policy, const Eigen::VectorXd& theta_old,
               const Eigen::VectorXd& theta_new, const TrajBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("mean_kl: empty batch");
  const Eigen::VectorXd saved = policy.params();
  policy.params() = theta_old;
  const GaussianDist old_dist = policy.dist(batch);
  policy.params() = theta_new;
  const double kl = policy.mean_kl_from(old_dist, batch);
  policy.params() = saved;
  return kl;
}

// ---- GaussianMlpPolicy ----

namespace {
std::vector<Act> gaussian_acts(std::size_t hidden_layers) {
  // tanh on the first two hidden layers, linear afterwards and on the head
  std::vector<Act> acts;
  for (std::size_t i = 0; i < hidden_layers; ++i)
    acts.push_back(i < 2 ? Act::kTanh : Act::kLinear);
  acts.push_back(Act::kLinear);
  return acts;
}

std::vector<int> mlp_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims = {in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}
}  // namespace

GaussianMlpPolicy::GaussianMlpPolicy(int obs_dim, int act_dim,
                                     std::vector<int> hidden, Rng& rng)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      mlp_(mlp_dims(obs_dim, hidden, act_dim), gaussian_acts(hidden.size())),
      hidden_(std::move(hidden)) {
  mlp_.register_layout(layout_, "mean");
  logstd_offset_ = layout_.add("log_std", act_dim_);
  theta_ = Eigen::VectorXd::Zero(layout_.total());
  mlp_.init_params(theta_.head(mlp_.num_params()), rng);
  // log_std starts at zero: unit exploration noise
}

std::string GaussianMlpPolicy::arch_descriptor() const {
  std::ostringstream os;
  os << "gaussian_mlp obs=" << obs_dim_ << " act=" << act_dim_ << " hidden=";
  for (std::size_t i = 0; i < hidden_.size(); ++i)
    os << (i ? "," : "") << hidden_[i];
  return os.str();
}

namespace {
class GaussianMlpSampler : public ActionSampler {
 public:
  explicit GaussianMlpSampler(const GaussianMlpPolicy& policy) : policy_(policy) {}
  void reset() override {}
  Eigen::VectorXd act(const Eigen::VectorXd& obs, Rng& rng) override {
    const Eigen::VectorXd mean = policy_.mean_action(obs);
    const Eigen::ArrayXd std = policy_.log_std().array().exp();
    Eigen::VectorXd a(mean.size());
    for (int i = 0; i < a.size(); ++i) a[i] = mean[i] + std[i] * rng.normal();
    return a;
  }

 private:
  const GaussianMlpPolicy& policy_;
};
}  // namespace

std::unique_ptr<ActionSampler> GaussianMlpPolicy::make_sampler() const {
  return std::make_unique<GaussianMlpSampler>(*this);
}

std::unique_ptr<StochasticPolicy> GaussianMlpPolicy::clone_stochastic() const {
  return std::make_unique<GaussianMlpPolicy>(*this);
}

Eigen::VectorXd GaussianMlpPolicy::mean_action(const Eigen::VectorXd& obs) const {
  return mlp_.forward_one(theta_, obs);
}

GaussianDist GaussianMlpPolicy::dist(const TrajBatch& batch) const {
  GaussianDist d;
  d.means = mlp_.forward(theta_, batch.observations, nullptr);
  d.log_std = log_std();
  return d;
}

double GaussianMlpPolicy::weighted_logprob_grad(
    const TrajBatch& batch, const Eigen::VectorXd& weights,
    Eigen::Ref<Eigen::VectorXd> grad) const {
  const int n = batch.size();
  if (weights.size() != n)
    throw std::invalid_argument("weighted_logprob_grad: weight length");
  Mlp::Trace trace;
  const Eigen::MatrixXd means = mlp_.forward(theta_, batch.observations, &trace);
  const Eigen::VectorXd ls = log_std();
  const Eigen::ArrayXd inv_var = (-2.0 * ls.array()).exp();

  const Eigen::MatrixXd delta = batch.actions - means;  // n x act
  // d logpi / d mean = delta / var, scaled per row by w
  Eigen::MatrixXd d_mean =
      (delta.array().rowwise() * inv_var.transpose().array()).matrix();
  d_mean.array().colwise() *= weights.array();
  mlp_.backward(theta_, trace, d_mean, grad.head(mlp_.num_params()));

  // d logpi / d log_std_j = (delta_j^2 / var_j) - 1
  const Eigen::MatrixXd z2 =
      (delta.array().square().rowwise() * inv_var.transpose().array()).matrix();
  grad.segment(logstd_offset_, act_dim_) +=
      (z2.array() - 1.0).matrix().transpose() * weights;

  const double base = -0.5 * act_dim_ * std::log(2.0 * M_PI) - ls.sum();
  double value = 0.0;
  for (int i = 0; i < n; ++i)
    value += weights[i] * (base - 0.5 * z2.row(i).sum());
  return value;
}

Eigen::VectorXd GaussianMlpPolicy::fisher_vector_product(
    const TrajBatch& batch, const Eigen::VectorXd& v, double damping) const {
  if (v.size() != theta_.size())
    throw std::invalid_argument("fisher_vector_product: dimension mismatch");
  const int n = batch.size();
  Mlp::Trace trace;
  mlp_.forward(theta_, batch.observations, &trace);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std().array()).exp();

  // Gauss-Newton form of the KL Hessian at matched parameters:
  // J^T diag(1/sigma^2) J / n for the mean head, 2 I for the log-std block.
  const Eigen::MatrixXd d_means = mlp_.jvp(theta_, trace, v);
  const Eigen::MatrixXd scaled =
      (d_means.array().rowwise() * inv_var.transpose().array()).matrix() / n;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(theta_.size());
  mlp_.backward(theta_, trace, scaled, out.head(mlp_.num_params()));
  out.segment(logstd_offset_, act_dim_) +=
      2.0 * v.segment(logstd_offset_, act_dim_);
  out += damping * v;
  return out;
}

}  // namespace rlbench
