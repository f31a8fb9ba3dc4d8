#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rlbench/po/wrappers.hpp"
#include "rlbench/tasks/cartpole.hpp"
#include "rlbench/tasks/registry.hpp"

using namespace rlbench;

namespace {

// base-task shim that records every action applied to it
class RecordingEnv : public Env {
 public:
  explicit RecordingEnv(std::unique_ptr<Env> base) : base_(std::move(base)) {}
  const EnvSpec& spec() const override { return base_->spec(); }
  Eigen::VectorXd reset(Rng& rng) override {
    applied.clear();
    return base_->reset(rng);
  }
  StepResult step(const Eigen::VectorXd& a) override {
    applied.push_back(a);
    return base_->step(a);
  }
  std::unique_ptr<Env> clone() const override {
    auto c = std::make_unique<RecordingEnv>(base_->clone());
    c->applied = applied;
    return c;
  }
  std::vector<Eigen::VectorXd> applied;

 private:
  std::unique_ptr<Env> base_;
};

Eigen::VectorXd act1(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("limited sensors projection") {
  SUBCASE("cart-pole keeps (x, theta)") {
    LimitedSensorsEnv env(make_task("cartpole_balance"));
    CHECK(env.spec().observation_dim == 2);
    Rng rng(1, 0);
    const Eigen::VectorXd obs = env.reset(rng);

    auto base = make_task("cartpole_balance");
    Rng rng2(1, 0);
    const Eigen::VectorXd full = base->reset(rng2);
    CHECK(obs[0] == full[0]);
    CHECK(obs[1] == full[1]);
    const auto sr = env.step(act1(1.0));
    CHECK(sr.observation.size() == 2);
  }
  SUBCASE("explicit index sets") {
    // keeping every index is the identity
    LimitedSensorsEnv all(make_task("cartpole_balance"), {0, 1, 2, 3});
    CHECK(all.spec().observation_dim == 4);
    Rng rng(2, 0);
    const Eigen::VectorXd obs = all.reset(rng);
    auto base = make_task("cartpole_balance");
    Rng rng2(2, 0);
    CHECK(obs == base->reset(rng2));

    CHECK_THROWS_AS(LimitedSensorsEnv(make_task("cartpole_balance"), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(LimitedSensorsEnv(make_task("cartpole_balance"), {0, 7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(LimitedSensorsEnv(make_task("cartpole_balance"), {1, 0}),
                    std::invalid_argument);
  }
  SUBCASE("rewards and termination pass through untouched") {
    LimitedSensorsEnv env(make_task("cartpole_balance"));
    auto base = make_task("cartpole_balance");
    Rng ra(3, 0), rb(3, 0);
    env.reset(ra);
    base->reset(rb);
    for (int t = 0; t < 30; ++t) {
      const auto we = env.step(act1(2.0));
      const auto be = base->step(act1(2.0));
      CHECK(we.reward == be.reward);
      CHECK(we.terminated == be.terminated);
      if (we.terminated) break;
    }
  }
}

TEST_CASE("noisy observations and delayed actions") {
  SUBCASE("sigma=0, delay=0 is bit-identical to the base task") {
    NoisyDelayedEnv wrapped(make_task("cartpole_swingup"), 0.0, 0);
    auto base = make_task("cartpole_swingup");
    Rng ra(5, 1), rb(5, 1);
    Eigen::VectorXd wo = wrapped.reset(ra);
    Eigen::VectorXd bo = base->reset(rb);
    CHECK(wo == bo);
    for (int t = 0; t < 50; ++t) {
      const double a = std::sin(0.1 * t);
      const auto ws = wrapped.step(act1(a));
      const auto bs = base->step(act1(a));
      CHECK(ws.observation == bs.observation);
      CHECK(ws.reward == bs.reward);
    }
    // identical rng state afterwards: the next draws agree
    CHECK(ra.draw_u64() == rb.draw_u64());
  }
  SUBCASE("delay k shifts the applied action sequence by exactly k") {
    const int delay = 3;
    auto recording = std::make_unique<RecordingEnv>(make_task("cartpole_swingup"));
    RecordingEnv* rec = recording.get();
    NoisyDelayedEnv wrapped(std::move(recording), 0.0, delay);
    Rng rng(7, 2);
    wrapped.reset(rng);
    std::vector<double> submitted;
    for (int t = 0; t < 20; ++t) {
      const double a = 0.3 * t - 1.0;
      submitted.push_back(a);
      wrapped.step(act1(a));
    }
    REQUIRE(rec->applied.size() == 20);
    for (int t = 0; t < 20; ++t) {
      if (t < delay)
        CHECK(rec->applied[t][0] == 0.0);  // neutral fill
      else
        CHECK(rec->applied[t][0] == submitted[t - delay]);
    }
  }
  SUBCASE("delayed wrapper matches a manually shifted base run") {
    const int delay = 3;
    NoisyDelayedEnv wrapped(make_task("mountain_car"), 0.0, delay);
    auto base = make_task("mountain_car");
    Rng ra(9, 4), rb(9, 4);
    wrapped.reset(ra);
    base->reset(rb);
    std::vector<double> script;
    for (int t = 0; t < 25; ++t) script.push_back(std::cos(0.2 * t));
    for (int t = 0; t < 25; ++t) {
      const auto ws = wrapped.step(act1(script[t]));
      const double shifted = t < delay ? 0.0 : script[t - delay];
      const auto bs = base->step(act1(shifted));
      CHECK(ws.observation == bs.observation);
      CHECK(ws.reward == bs.reward);
    }
  }
  SUBCASE("noise is the seeded gaussian stream on top of the true state") {
    const double sigma = 0.1;
    NoisyDelayedEnv wrapped(make_task("cartpole_balance"), sigma, 0);
    auto base = make_task("cartpole_balance");
    Rng ra(11, 6), rb(11, 6);
    const Eigen::VectorXd wo = wrapped.reset(ra);
    const Eigen::VectorXd bo = base->reset(rb);
    // regenerate the wrapper's noise stream: the wrapper derived its seed
    // from the rollout rng right after the base reset
    const std::uint64_t noise_seed = rb.draw_u64();
    CHECK(noise_seed == wrapped.noise_seed());
    Rng noise(noise_seed, 0);
    for (int i = 0; i < 4; ++i)
      CHECK(wo[i] - bo[i] == doctest::Approx(sigma * noise.normal()).epsilon(1e-12));
    for (int t = 0; t < 10; ++t) {
      const auto ws = wrapped.step(act1(0.5));
      const auto bs = base->step(act1(0.5));
      CHECK(ws.reward == bs.reward);  // noise never touches rewards
      for (int i = 0; i < 4; ++i)
        CHECK(ws.observation[i] - bs.observation[i] ==
              doctest::Approx(sigma * noise.normal()).epsilon(1e-12));
    }
  }
}

TEST_CASE("system identification") {
  SUBCASE("draws stay inside the declared ranges") {
    SysIdEnv env(make_task("cartpole_balance"),
                 default_sysid_ranges("cartpole_balance"));
    const double base_length = make_task("cartpole_balance")->param("pole_length");
    Rng rng(13, 0);
    double lo = 1e9, hi = -1e9;
    for (int ep = 0; ep < 10000; ++ep) {
      env.reset(rng);
      const double f = env.last_factors()[0];
      CHECK(f >= 0.5);
      CHECK(f <= 1.5);
      CHECK(env.param("pole_length") == doctest::Approx(base_length * f));
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    CHECK(lo < 0.55);  // the range is actually exercised
    CHECK(hi > 1.45);
  }
  SUBCASE("parameters stay fixed within an episode") {
    SysIdEnv env(make_task("mountain_car"), default_sysid_ranges("mountain_car"));
    Rng rng(15, 0);
    env.reset(rng);
    const double w = env.param("valley_width");
    for (int t = 0; t < 20; ++t) {
      env.step(act1(1.0));
      CHECK(env.param("valley_width") == w);
    }
  }
  SUBCASE("degenerate range means identical dynamics every episode") {
    SysIdEnv env(make_task("cartpole_balance"), {{"pole_length", 1.0, 1.0}});
    Rng rng(17, 0);
    env.reset(rng);
    const double l = env.param("pole_length");
    env.reset(rng);
    CHECK(env.param("pole_length") == l);
  }
  SUBCASE("observation does not include the drawn parameters") {
    SysIdEnv env(make_task("cartpole_balance"),
                 default_sysid_ranges("cartpole_balance"));
    CHECK(env.spec().observation_dim ==
          make_task("cartpole_balance")->spec().observation_dim);
  }
  SUBCASE("acrobot randomizes both link lengths independently") {
    SysIdEnv env(make_task("acrobot"), default_sysid_ranges("acrobot"));
    Rng rng(19, 0);
    bool differ = false;
    for (int ep = 0; ep < 50; ++ep) {
      env.reset(rng);
      differ = differ || std::abs(env.last_factors()[0] -
                                  env.last_factors()[1]) > 1e-6;
    }
    CHECK(differ);
  }
  SUBCASE("invalid ranges are rejected") {
    CHECK_THROWS_AS(
        SysIdEnv(make_task("cartpole_balance"), {{"pole_length", 0.0, 1.0}}),
        std::invalid_argument);
  }
}

TEST_CASE("wrappers compose") {
  auto env = std::make_unique<LimitedSensorsEnv>(std::make_unique<NoisyDelayedEnv>(
      make_task("cartpole_balance"), 0.1, 3));
  CHECK(env->spec().observation_dim == 2);
  Rng rng(21, 0);
  Eigen::VectorXd obs = env->reset(rng);
  CHECK(obs.size() == 2);
  auto copy = env->clone();
  const auto s1 = env->step(act1(1.0));
  const auto s2 = copy->step(act1(1.0));
  CHECK(s1.reward == s2.reward);  // clones evolve identically
}
