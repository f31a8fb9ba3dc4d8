#include "rlbench/nn/lstm.hpp"

#include <cmath>
#include <sstream>

namespace rlbench {

namespace {
inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) {
  return 1.0 / (1.0 + (-z).exp());
}
}  // namespace

LstmGaussianPolicy::LstmGaussianPolicy(int obs_dim, int act_dim, int hidden,
                                       Rng& rng)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      hidden_(hidden),
      input_dim_(obs_dim + act_dim) {
  off_wx_ = layout_.add("lstm.wx", 4 * hidden_ * input_dim_);
  off_wh_ = layout_.add("lstm.wh", 4 * hidden_ * hidden_);
  off_b_ = layout_.add("lstm.b", 4 * hidden_);
  off_wout_ = layout_.add("head.w", act_dim_ * hidden_);
  off_bout_ = layout_.add("head.b", act_dim_);
  off_logstd_ = layout_.add("log_std", act_dim_);
  theta_ = Eigen::VectorXd::Zero(layout_.total());

  auto init_uniform = [&](int offset, int rows, int cols) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    for (int i = 0; i < rows * cols; ++i)
      theta_[offset + i] = rng.uniform(-bound, bound);
  };
  init_uniform(off_wx_, 4 * hidden_, input_dim_);
  init_uniform(off_wh_, 4 * hidden_, hidden_);
  init_uniform(off_wout_, act_dim_, hidden_);
  // biases and log_std stay zero
}

Eigen::Map<const Eigen::MatrixXd> LstmGaussianPolicy::wx(const Eigen::VectorXd& t) const {
  return {t.data() + off_wx_, 4 * hidden_, input_dim_};
}
Eigen::Map<const Eigen::MatrixXd> LstmGaussianPolicy::wh(const Eigen::VectorXd& t) const {
  return {t.data() + off_wh_, 4 * hidden_, hidden_};
}
Eigen::Map<const Eigen::VectorXd> LstmGaussianPolicy::b(const Eigen::VectorXd& t) const {
  return {t.data() + off_b_, 4 * hidden_};
}
Eigen::Map<const Eigen::MatrixXd> LstmGaussianPolicy::wout(const Eigen::VectorXd& t) const {
  return {t.data() + off_wout_, act_dim_, hidden_};
}
Eigen::Map<const Eigen::VectorXd> LstmGaussianPolicy::bout(const Eigen::VectorXd& t) const {
  return {t.data() + off_bout_, act_dim_};
}

std::string LstmGaussianPolicy::arch_descriptor() const {
  std::ostringstream os;
  os << "lstm_gaussian obs=" << obs_dim_ << " act=" << act_dim_
     << " hidden=" << hidden_;
  return os.str();
}

void LstmGaussianPolicy::step_cell(const Eigen::VectorXd& input,
                                   Eigen::VectorXd& h, Eigen::VectorXd& c) const {
  const Eigen::VectorXd z = wx(theta_) * input + wh(theta_) * h + b(theta_);
  const Eigen::ArrayXd gi = sigmoid(z.segment(0, hidden_).array());
  const Eigen::ArrayXd gf = sigmoid(z.segment(hidden_, hidden_).array());
  const Eigen::ArrayXd gg = z.segment(2 * hidden_, hidden_).array().tanh();
  const Eigen::ArrayXd go = sigmoid(z.segment(3 * hidden_, hidden_).array());
  c = (gf * c.array() + gi * gg).matrix();
  h = (go * c.array().tanh()).matrix();
}

Eigen::VectorXd LstmGaussianPolicy::mean_from_hidden(const Eigen::VectorXd& h) const {
  return wout(theta_) * h + bout(theta_);
}

void LstmGaussianPolicy::unroll_traj(const TrajBatch& batch, int traj,
                                     Unroll& u, Eigen::MatrixXd& means) const {
  const int begin = batch.offsets[traj], end = batch.offsets[traj + 1];
  const int len = end - begin;
  u.inputs.resize(len);
  u.gates_i.resize(len);
  u.gates_f.resize(len);
  u.gates_g.resize(len);
  u.gates_o.resize(len);
  u.cells.resize(len);
  u.tanh_cells.resize(len);
  u.hiddens.resize(len);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden_);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden_);
  for (int t = 0; t < len; ++t) {
    Eigen::VectorXd x(input_dim_);
    x.head(obs_dim_) = batch.observations.row(begin + t).transpose();
    if (t == 0)
      x.tail(act_dim_).setZero();
    else
      x.tail(act_dim_) = batch.actions.row(begin + t - 1).transpose();

    const Eigen::VectorXd z = wx(theta_) * x + wh(theta_) * h + b(theta_);
    const Eigen::ArrayXd gi = sigmoid(z.segment(0, hidden_).array());
    const Eigen::ArrayXd gf = sigmoid(z.segment(hidden_, hidden_).array());
    const Eigen::ArrayXd gg = z.segment(2 * hidden_, hidden_).array().tanh();
    const Eigen::ArrayXd go = sigmoid(z.segment(3 * hidden_, hidden_).array());
    c = (gf * c.array() + gi * gg).matrix();
    h = (go * c.array().tanh()).matrix();

    u.inputs[t] = std::move(x);
    u.gates_i[t] = gi.matrix();
    u.gates_f[t] = gf.matrix();
    u.gates_g[t] = gg.matrix();
    u.gates_o[t] = go.matrix();
    u.cells[t] = c;
    u.tanh_cells[t] = c.array().tanh().matrix();
    u.hiddens[t] = h;
    means.row(begin + t) = (wout(theta_) * h + bout(theta_)).transpose();
  }
}

GaussianDist LstmGaussianPolicy::dist(const TrajBatch& batch) const {
  GaussianDist d;
  d.means.resize(batch.size(), act_dim_);
  Unroll u;
  for (int k = 0; k < batch.num_trajs(); ++k) unroll_traj(batch, k, u, d.means);
  d.log_std = log_std();
  return d;
}

// d_means rows cover the whole batch; only this trajectory's rows are read
void LstmGaussianPolicy::bptt_traj(const Unroll& u, const Eigen::MatrixXd& d_means,
                                   int begin, Eigen::Ref<Eigen::VectorXd> grad) const {
  const int len = static_cast<int>(u.inputs.size());
  Eigen::Map<Eigen::MatrixXd> g_wx(grad.data() + off_wx_, 4 * hidden_, input_dim_);
  Eigen::Map<Eigen::MatrixXd> g_wh(grad.data() + off_wh_, 4 * hidden_, hidden_);
  Eigen::Map<Eigen::VectorXd> g_b(grad.data() + off_b_, 4 * hidden_);
  Eigen::Map<Eigen::MatrixXd> g_wout(grad.data() + off_wout_, act_dim_, hidden_);
  Eigen::Map<Eigen::VectorXd> g_bout(grad.data() + off_bout_, act_dim_);

  Eigen::VectorXd dh = Eigen::VectorXd::Zero(hidden_);
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(hidden_);
  for (int t = len - 1; t >= 0; --t) {
    const Eigen::VectorXd dmu = d_means.row(begin + t).transpose();
    g_wout += dmu * u.hiddens[t].transpose();
    g_bout += dmu;
    dh += wout(theta_).transpose() * dmu;

    const Eigen::ArrayXd go = u.gates_o[t].array();
    const Eigen::ArrayXd tc = u.tanh_cells[t].array();
    dc.array() += dh.array() * go * (1.0 - tc.square());
    const Eigen::ArrayXd d_go = dh.array() * tc;

    const Eigen::ArrayXd gi = u.gates_i[t].array();
    const Eigen::ArrayXd gf = u.gates_f[t].array();
    const Eigen::ArrayXd gg = u.gates_g[t].array();
    const Eigen::ArrayXd c_prev =
        t > 0 ? Eigen::ArrayXd(u.cells[t - 1].array())
                : Eigen::ArrayXd(Eigen::ArrayXd::Zero(hidden_));

    Eigen::VectorXd dz(4 * hidden_);
    dz.segment(0, hidden_) = (dc.array() * gg * gi * (1.0 - gi)).matrix();
    dz.segment(hidden_, hidden_) = (dc.array() * c_prev * gf * (1.0 - gf)).matrix();
    dz.segment(2 * hidden_, hidden_) = (dc.array() * gi * (1.0 - gg.square())).matrix();
    dz.segment(3 * hidden_, hidden_) = (d_go * go * (1.0 - go)).matrix();

    g_wx += dz * u.inputs[t].transpose();
    if (t > 0) g_wh += dz * u.hiddens[t - 1].transpose();
    g_b += dz;

    dh = wh(theta_).transpose() * dz;
    dc = (dc.array() * gf).matrix();
  }
}

double LstmGaussianPolicy::weighted_logprob_grad(
    const TrajBatch& batch, const Eigen::VectorXd& weights,
    Eigen::Ref<Eigen::VectorXd> grad) const {
  const int n = batch.size();
  Eigen::MatrixXd means(n, act_dim_);
  const Eigen::VectorXd ls = log_std();
  const Eigen::ArrayXd inv_var = (-2.0 * ls.array()).exp();

  double value = 0.0;
  Eigen::ArrayXd logstd_grad = Eigen::ArrayXd::Zero(act_dim_);
  const double base = -0.5 * act_dim_ * std::log(2.0 * M_PI) - ls.sum();

  Unroll u;
  for (int k = 0; k < batch.num_trajs(); ++k) {
    const int begin = batch.offsets[k], end = batch.offsets[k + 1];
    unroll_traj(batch, k, u, means);
    Eigen::MatrixXd d_means = Eigen::MatrixXd::Zero(n, act_dim_);
    for (int i = begin; i < end; ++i) {
      const Eigen::ArrayXd delta =
          (batch.actions.row(i) - means.row(i)).transpose().array();
      const Eigen::ArrayXd z2 = delta.square() * inv_var;
      value += weights[i] * (base - 0.5 * z2.sum());
      logstd_grad += weights[i] * (z2 - 1.0);
      d_means.row(i) = (weights[i] * delta * inv_var).transpose();
    }
    bptt_traj(u, d_means, begin, grad);
  }
  grad.segment(off_logstd_, act_dim_) += logstd_grad.matrix();
  return value;
}

void LstmGaussianPolicy::jvp_traj(const Unroll& u, const Eigen::VectorXd& v,
                                  int begin, Eigen::MatrixXd& d_means) const {
  const int len = static_cast<int>(u.inputs.size());
  Eigen::Map<const Eigen::MatrixXd> v_wx(v.data() + off_wx_, 4 * hidden_, input_dim_);
  Eigen::Map<const Eigen::MatrixXd> v_wh(v.data() + off_wh_, 4 * hidden_, hidden_);
  Eigen::Map<const Eigen::VectorXd> v_b(v.data() + off_b_, 4 * hidden_);
  Eigen::Map<const Eigen::MatrixXd> v_wout(v.data() + off_wout_, act_dim_, hidden_);
  Eigen::Map<const Eigen::VectorXd> v_bout(v.data() + off_bout_, act_dim_);

  Eigen::ArrayXd dh = Eigen::ArrayXd::Zero(hidden_);
  Eigen::ArrayXd dc = Eigen::ArrayXd::Zero(hidden_);
  for (int t = 0; t < len; ++t) {
    const Eigen::VectorXd h_prev =
        t > 0 ? u.hiddens[t - 1] : Eigen::VectorXd::Zero(hidden_);
    const Eigen::ArrayXd c_prev =
        t > 0 ? Eigen::ArrayXd(u.cells[t - 1].array())
                : Eigen::ArrayXd(Eigen::ArrayXd::Zero(hidden_));

    const Eigen::VectorXd dz = v_wx * u.inputs[t] + v_wh * h_prev +
                               wh(theta_) * dh.matrix() + v_b;
    const Eigen::ArrayXd gi = u.gates_i[t].array();
    const Eigen::ArrayXd gf = u.gates_f[t].array();
    const Eigen::ArrayXd gg = u.gates_g[t].array();
    const Eigen::ArrayXd go = u.gates_o[t].array();

    const Eigen::ArrayXd d_gi = gi * (1.0 - gi) * dz.segment(0, hidden_).array();
    const Eigen::ArrayXd d_gf = gf * (1.0 - gf) * dz.segment(hidden_, hidden_).array();
    const Eigen::ArrayXd d_gg = (1.0 - gg.square()) * dz.segment(2 * hidden_, hidden_).array();
    const Eigen::ArrayXd d_go = go * (1.0 - go) * dz.segment(3 * hidden_, hidden_).array();

    dc = d_gf * c_prev + gf * dc + d_gi * gg + gi * d_gg;
    const Eigen::ArrayXd tc = u.tanh_cells[t].array();
    dh = d_go * tc + go * (1.0 - tc.square()) * dc;

    d_means.row(begin + t) =
        (v_wout * u.hiddens[t] + wout(theta_) * dh.matrix() + v_bout).transpose();
  }
}

Eigen::VectorXd LstmGaussianPolicy::fisher_vector_product(
    const TrajBatch& batch, const Eigen::VectorXd& v, double damping) const {
  if (v.size() != theta_.size())
    throw std::invalid_argument("fisher_vector_product: dimension mismatch");
  const int n = batch.size();
  const Eigen::ArrayXd inv_var = (-2.0 * log_std().array()).exp();

  Eigen::VectorXd out = Eigen::VectorXd::Zero(theta_.size());
  Eigen::MatrixXd means(n, act_dim_);
  Eigen::MatrixXd d_means = Eigen::MatrixXd::Zero(n, act_dim_);
  Unroll u;
  for (int k = 0; k < batch.num_trajs(); ++k) {
    const int begin = batch.offsets[k];
    unroll_traj(batch, k, u, means);
    jvp_traj(u, v, begin, d_means);
    Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(n, act_dim_);
    for (int i = begin; i < batch.offsets[k + 1]; ++i)
      scaled.row(i) =
          (d_means.row(i).transpose().array() * inv_var / n).transpose();
    bptt_traj(u, scaled, begin, out);
  }
  out.segment(off_logstd_, act_dim_) += 2.0 * v.segment(off_logstd_, act_dim_);
  out += damping * v;
  return out;
}

namespace {
class LstmSampler : public ActionSampler {
 public:
  explicit LstmSampler(const LstmGaussianPolicy& policy)
      : policy_(policy),
        h_(Eigen::VectorXd::Zero(policy.hidden_dim())),
        c_(Eigen::VectorXd::Zero(policy.hidden_dim())),
        prev_action_(Eigen::VectorXd::Zero(policy.act_dim())) {}

  void reset() override {
    h_.setZero();
    c_.setZero();
    prev_action_.setZero();
  }

  Eigen::VectorXd act(const Eigen::VectorXd& obs, Rng& rng) override {
    Eigen::VectorXd x(obs.size() + prev_action_.size());
    x << obs, prev_action_;
    policy_.step_cell(x, h_, c_);
    const Eigen::VectorXd mean = policy_.mean_from_hidden(h_);
    const Eigen::ArrayXd std = policy_.log_std().array().exp();
    Eigen::VectorXd a(mean.size());
    for (int i = 0; i < a.size(); ++i) a[i] = mean[i] + std[i] * rng.normal();
    prev_action_ = a;
    return a;
  }

 private:
  const LstmGaussianPolicy& policy_;
  Eigen::VectorXd h_, c_, prev_action_;
};
}  // namespace

std::unique_ptr<ActionSampler> LstmGaussianPolicy::make_sampler() const {
  return std::make_unique<LstmSampler>(*this);
}

std::unique_ptr<StochasticPolicy> LstmGaussianPolicy::clone_stochastic() const {
  return std::make_unique<LstmGaussianPolicy>(*this);
}

}  // namespace rlbench
