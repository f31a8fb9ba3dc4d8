#include "rlbench/po/wrappers.hpp"

#include <stdexcept>

namespace rlbench {

// ---- limited sensors ----

void LimitedSensorsEnv::init() {
  const EnvSpec& bs = base_->spec();
  if (kept_.empty())
    throw std::invalid_argument("LimitedSensors: kept index set is empty");
  for (std::size_t i = 0; i < kept_.size(); ++i) {
    if (kept_[i] < 0 || kept_[i] >= bs.observation_dim)
      throw std::invalid_argument("LimitedSensors: index out of range");
    if (i > 0 && kept_[i] <= kept_[i - 1])
      throw std::invalid_argument("LimitedSensors: indices must be strictly increasing");
  }
  spec_ = bs;
  spec_.observation_dim = static_cast<int>(kept_.size());
  spec_.positional_indices.clear();
  for (int i = 0; i < spec_.observation_dim; ++i)
    spec_.positional_indices.push_back(i);
}

LimitedSensorsEnv::LimitedSensorsEnv(std::unique_ptr<Env> base,
                                     std::vector<int> kept_indices)
    : base_(std::move(base)), kept_(std::move(kept_indices)) {
  init();
}

LimitedSensorsEnv::LimitedSensorsEnv(std::unique_ptr<Env> base)
    : base_(std::move(base)) {
  kept_ = base_->spec().positional_indices;
  if (kept_.empty())
    throw std::invalid_argument(
        "LimitedSensors: base task declares no positional indices");
  init();
}

Eigen::VectorXd LimitedSensorsEnv::project(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(kept_.size());
  for (std::size_t i = 0; i < kept_.size(); ++i) out[i] = full[kept_[i]];
  return out;
}

Eigen::VectorXd LimitedSensorsEnv::reset(Rng& rng) {
  return project(base_->reset(rng));
}

StepResult LimitedSensorsEnv::step(const Eigen::VectorXd& action) {
  StepResult sr = base_->step(action);
  sr.observation = project(sr.observation);
  return sr;
}

std::unique_ptr<Env> LimitedSensorsEnv::clone() const {
  auto copy = std::make_unique<LimitedSensorsEnv>(base_->clone(), kept_);
  return copy;
}

// ---- noisy observations + delayed actions ----

NoisyDelayedEnv::NoisyDelayedEnv(std::unique_ptr<Env> base, double noise_sigma,
                                 int delay_frames)
    : base_(std::move(base)), sigma_(noise_sigma), delay_(delay_frames) {
  if (sigma_ < 0.0) throw std::invalid_argument("NoisyDelayed: sigma must be >= 0");
  if (delay_ < 0) throw std::invalid_argument("NoisyDelayed: delay must be >= 0");
}

Eigen::VectorXd NoisyDelayedEnv::noisy(const Eigen::VectorXd& obs) {
  if (sigma_ == 0.0) return obs;
  Eigen::VectorXd out = obs;
  for (int i = 0; i < out.size(); ++i) out[i] += sigma_ * noise_rng_->normal();
  return out;
}

Eigen::VectorXd NoisyDelayedEnv::reset(Rng& rng) {
  Eigen::VectorXd obs = base_->reset(rng);
  // Derive the noise stream after the base reset so that a sigma=0 wrapper
  // consumes no randomness at all and stays bit-identical to the base task.
  if (sigma_ > 0.0) {
    noise_seed_ = rng.draw_u64();
    noise_rng_ = std::make_unique<Rng>(noise_seed_, 0);
  }
  pending_.assign(delay_,
                  Eigen::VectorXd::Zero(base_->spec().action_dim));
  return noisy(obs);
}

StepResult NoisyDelayedEnv::step(const Eigen::VectorXd& action) {
  pending_.push_back(action);
  Eigen::VectorXd applied = std::move(pending_.front());
  pending_.pop_front();
  StepResult sr = base_->step(applied);
  sr.observation = noisy(sr.observation);
  return sr;
}

std::unique_ptr<Env> NoisyDelayedEnv::clone() const {
  auto copy = std::make_unique<NoisyDelayedEnv>(base_->clone(), sigma_, delay_);
  copy->pending_ = pending_;
  copy->noise_seed_ = noise_seed_;
  if (noise_rng_) copy->noise_rng_ = std::make_unique<Rng>(*noise_rng_);
  return copy;
}

// ---- system identification ----

SysIdEnv::SysIdEnv(std::unique_ptr<Env> base, std::vector<ParamRange> ranges)
    : base_(std::move(base)), ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (!(r.low > 0.0 && r.low <= r.high))
      throw std::invalid_argument("SysId: need 0 < low <= high");
    base_values_.push_back(base_->param(r.name));
  }
  last_factors_.assign(ranges_.size(), 1.0);
}

Eigen::VectorXd SysIdEnv::reset(Rng& rng) {
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    last_factors_[i] = rng.uniform(ranges_[i].low, ranges_[i].high);
    base_->set_param(ranges_[i].name, base_values_[i] * last_factors_[i]);
  }
  return base_->reset(rng);
}

StepResult SysIdEnv::step(const Eigen::VectorXd& action) {
  return base_->step(action);
}

std::unique_ptr<Env> SysIdEnv::clone() const {
  auto copy = std::make_unique<SysIdEnv>(base_->clone(), ranges_);
  copy->base_values_ = base_values_;
  copy->last_factors_ = last_factors_;
  return copy;
}

void SysIdEnv::set_param(const std::string& n, double v) {
  base_->set_param(n, v);
  // overriding a randomized parameter rebases its nominal value
  for (std::size_t i = 0; i < ranges_.size(); ++i)
    if (ranges_[i].name == n) base_values_[i] = v;
}

}  // namespace rlbench
