#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlbench/algos/batch_algos.hpp"
#include "rlbench/algos/cg.hpp"
#include "rlbench/algos/reps.hpp"
#include "rlbench/core/returns.hpp"

using namespace rlbench;

namespace {

// synthetic trajectories with random dynamics for update-rule tests
std::vector<Trajectory> synthetic_trajs(int count, int len, int obs_dim,
                                        int act_dim, Rng& rng) {
  std::vector<Trajectory> trajs(count);
  for (auto& t : trajs) {
    for (int i = 0; i < len; ++i) {
      t.observations.push_back(rng.normal_vector(obs_dim));
      t.actions.push_back(rng.normal_vector(act_dim));
      t.rewards.push_back(rng.uniform(-1.0, 1.0));
    }
    t.final_observation = rng.normal_vector(obs_dim);
  }
  return trajs;
}

// trajectories whose actions are drawn from the policy itself; trust-region
// steps assume on-policy data, off-policy actions void the quadratic model
std::vector<Trajectory> on_policy_trajs(const StochasticPolicy& policy,
                                        int count, int len, Rng& rng) {
  auto sampler = policy.make_sampler();
  std::vector<Trajectory> trajs(count);
  for (auto& t : trajs) {
    sampler->reset();
    for (int i = 0; i < len; ++i) {
      t.observations.push_back(rng.normal_vector(policy.obs_dim()));
      t.actions.push_back(sampler->act(t.observations.back(), rng));
      t.rewards.push_back(rng.uniform(-1.0, 1.0));
    }
    t.final_observation = rng.normal_vector(policy.obs_dim());
  }
  return trajs;
}

}  // namespace

TEST_CASE("baseline features") {
  SUBCASE("direct evaluation at t = 0") {
    Eigen::VectorXd s(1);
    s << 2.0;
    const Eigen::VectorXd phi = baseline_features(s, 0);
    REQUIRE(phi.size() == 6);
    Eigen::VectorXd want(6);
    want << 2, 4, 0, 0, 0, 1;
    CHECK(phi == want);
  }
  SUBCASE("feature length is 2*obs_dim + 4") {
    CHECK(baseline_features(Eigen::VectorXd::Zero(4), 3).size() == 12);
  }
  SUBCASE("time polynomial at t = 100") {
    Eigen::VectorXd s(2);
    s << 1.0, -1.0;
    const Eigen::VectorXd phi = baseline_features(s, 100);
    Eigen::VectorXd want(8);
    want << 1, -1, 1, 1, 1, 1, 1, 1;
    CHECK(phi == want);
  }
}

TEST_CASE("linear baseline fit") {
  Rng rng(3, 0);
  const int n = 200, d = 3;
  Eigen::MatrixXd phi(n, d);
  for (int i = 0; i < n * d; ++i) phi(i / d, i % d) = rng.normal();

  SUBCASE("realizable targets are reproduced") {
    const Eigen::VectorXd w = rng.normal_vector(d);
    const Eigen::VectorXd y = phi * w;
    LinearBaseline b;
    b.fit(phi, y);
    CHECK((b.predict(phi) - y).lpNorm<Eigen::Infinity>() < 1e-6);
  }
  SUBCASE("constant returns through the bias feature") {
    Eigen::MatrixXd features(n, 2);
    for (int i = 0; i < n; ++i) features.row(i) << rng.normal(), 1.0;
    LinearBaseline b;
    b.fit(features, Eigen::VectorXd::Constant(n, 3.7));
    CHECK((b.predict(features).array() - 3.7).abs().maxCoeff() < 1e-5);
  }
  SUBCASE("matches the normal-equations oracle") {
    const Eigen::VectorXd y = rng.normal_vector(n);
    LinearBaseline b;
    b.fit(phi, y);
    const Eigen::VectorXd oracle_coeffs =
        oracle::normal_equations(phi, y, LinearBaseline::kRidge);
    CHECK((b.coeffs() - oracle_coeffs).norm() < 1e-8);
  }
}

TEST_CASE("batch sample assembly") {
  Rng rng(5, 0);
  auto trajs = synthetic_trajs(3, 7, 2, 1, rng);
  const double gamma = 0.9;
  const BatchSample batch = BatchSample::build(trajs, gamma);
  CHECK(batch.size() == 21);
  // advantage = R_t - b_t exactly, with R_t from discounted_returns
  CHECK((batch.advantages - (batch.returns - batch.baselines)).norm() == 0.0);
  const auto r0 = discounted_returns(trajs[0].rewards, gamma);
  for (int t = 0; t < 7; ++t)
    CHECK(batch.returns[t] == doctest::Approx(r0[t]).epsilon(1e-12));
  // next observations shift within the trajectory and end on the final one
  CHECK(batch.next_observations.row(0) ==
        batch.traj.observations.row(1));
  CHECK(batch.next_observations.row(6).transpose() ==
        trajs[0].final_observation);
}

TEST_CASE("conjugate gradient") {
  SUBCASE("identity solves in one iteration") {
    Eigen::VectorXd b(3);
    b << 1, -2, 3;
    int calls = 0;
    const Eigen::VectorXd x = conjugate_gradient(
        [&](const Eigen::VectorXd& v) {
          ++calls;
          return v;
        },
        b, 1);
    CHECK((x - b).norm() < 1e-14);
    CHECK(calls == 1);
  }
  SUBCASE("diagonal system") {
    Eigen::VectorXd b(2);
    b << 2, 5;
    Eigen::MatrixXd a = Eigen::Vector2d(2, 5).asDiagonal();
    const Eigen::VectorXd x =
        conjugate_gradient([&](const Eigen::VectorXd& v) { return a * v; }, b, 10);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
  }
  SUBCASE("random 50x50 SPD systems against a dense oracle") {
    Rng rng(7, 0);
    for (int trial = 0; trial < 3; ++trial) {
      const int n = 50;
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n * n; ++i) m(i / n, i % n) = rng.normal();
      const Eigen::MatrixXd a =
          m * m.transpose() / n + Eigen::MatrixXd::Identity(n, n);
      const Eigen::VectorXd b = rng.normal_vector(n);
      const Eigen::VectorXd x = conjugate_gradient(
          [&](const Eigen::VectorXd& v) { return a * v; }, b, n, 1e-10);
      CHECK((a * x - b).norm() / b.norm() < 1e-8);
      CHECK((x - oracle::dense_solve(a, b)).norm() / b.norm() < 1e-6);
    }
  }
}

TEST_CASE("natural gradient step closed forms") {
  SUBCASE("identity FIM") {
    Eigen::VectorXd g(2);
    g << 3, 4;
    const auto step = natural_gradient_step(
        [](const Eigen::VectorXd& v) { return v; }, g, 0.5, 10);
    REQUIRE(step.valid);
    CHECK(step.direction[0] == doctest::Approx(3.0));
    CHECK(step.direction[1] == doctest::Approx(4.0));
    CHECK(step.alpha == doctest::Approx(std::sqrt(0.02)));
    const Eigen::VectorXd delta = step.alpha * step.direction;
    CHECK(delta[0] == doctest::Approx(0.42426).epsilon(1e-4));
    CHECK(delta[1] == doctest::Approx(0.56569).epsilon(1e-4));
  }
  SUBCASE("zero gradient is rejected") {
    const auto step = natural_gradient_step(
        [](const Eigen::VectorXd& v) { return v; }, Eigen::VectorXd::Zero(2),
        0.5, 10);
    CHECK(!step.valid);
  }
  SUBCASE("diagonal FIM diag(4,1) with g=(2,1)") {
    Eigen::VectorXd g(2);
    g << 2, 1;
    Eigen::MatrixXd a = Eigen::Vector2d(4, 1).asDiagonal();
    const double delta_kl = 0.1;
    const auto step = natural_gradient_step(
        [&](const Eigen::VectorXd& v) { return a * v; }, g, delta_kl, 10);
    REQUIRE(step.valid);
    CHECK(step.direction[0] == doctest::Approx(0.5));
    CHECK(step.direction[1] == doctest::Approx(1.0));
    CHECK(step.alpha == doctest::Approx(std::sqrt(delta_kl / 2.0)));
  }
}

TEST_CASE("reinforce") {
  Rng rng(11, 0);
  GaussianMlpPolicy policy(2, 1, {4}, rng);  // small policy, 17 params

  SUBCASE("zero advantages give a zero gradient") {
    auto trajs = synthetic_trajs(2, 5, 2, 1, rng);
    BatchSample batch = BatchSample::build(trajs, 0.99);
    batch.advantages.setZero();
    CHECK(policy_gradient(batch, policy).norm() == 0.0);
  }
  SUBCASE("single timestep with advantage 1") {
    auto trajs = synthetic_trajs(1, 1, 2, 1, rng);
    BatchSample batch = BatchSample::build(trajs, 0.99);
    batch.advantages.setConstant(1.0);
    const Eigen::VectorXd g = policy_gradient(batch, policy);
    Eigen::VectorXd glp = Eigen::VectorXd::Zero(policy.num_params());
    policy.weighted_logprob_grad(batch.traj, Eigen::VectorXd::Ones(1), glp);
    CHECK((g - glp).norm() < 1e-14);  // n = 1, so the 1/n factor is 1
  }
  SUBCASE("matches finite differences of the frozen-advantage surrogate") {
    auto trajs = synthetic_trajs(1, 3, 2, 1, rng);
    BatchSample batch = BatchSample::build(trajs, 0.99);
    const Eigen::VectorXd g = policy_gradient(batch, policy);
    auto clone = policy.clone_stochastic();
    const Eigen::VectorXd fd = oracle::fd_gradient(
        [&](const Eigen::VectorXd& theta) {
          clone->params() = theta;
          return clone->log_probs(batch.traj).dot(batch.advantages) /
                 batch.size();
        },
        policy.params());
    CHECK(oracle::rel_error(g, fd) < 1e-4);
  }
  SUBCASE("update moves parameters along the gradient") {
    auto trajs = synthetic_trajs(2, 4, 2, 1, rng);
    const BatchSample batch = BatchSample::build(trajs, 0.99);
    const Eigen::VectorXd before = policy.params();
    const Eigen::VectorXd g = policy_gradient(batch, policy);
    Reinforce algo(1e-2);
    const auto stats = algo.update(batch, policy);
    CHECK(stats.updated);
    CHECK((policy.params() - before - 1e-2 * g).norm() < 1e-12);
    CHECK(std::isfinite(stats.mean_kl));
  }
}

TEST_CASE("tnpg and trpo on policy batches") {
  Rng rng(13, 0);
  GaussianMlpPolicy policy(2, 1, {6}, rng);
  auto trajs = on_policy_trajs(policy, 8, 25, rng);
  BatchSample batch = BatchSample::build(trajs, 0.99);
  TrustRegionConfig cfg;
  cfg.delta_kl = 0.05;

  SUBCASE("tnpg: measured KL is near the quadratic-model prediction") {
    // alpha = sqrt(delta/(g.d)) makes the quadratic model predict delta/2
    GaussianMlpPolicy p = policy;
    Tnpg algo(cfg);
    const auto stats = algo.update(batch, p);
    REQUIRE(stats.updated);
    CHECK(stats.mean_kl > 0.0);
    CHECK(stats.mean_kl < 1.5 * cfg.delta_kl);
    CHECK(stats.mean_kl == doctest::Approx(cfg.delta_kl / 2.0).epsilon(0.2));
  }
  SUBCASE("predicted KL from the quadratic model: 0.5 a^2 d.Fd = delta/2") {
    const Eigen::VectorXd g = policy_gradient(batch, policy);
    auto fvp = [&](const Eigen::VectorXd& v) {
      return policy.fisher_vector_product(batch.traj, v);
    };
    const auto step = natural_gradient_step(fvp, g, cfg.delta_kl, cfg.cg_iters);
    REQUIRE(step.valid);
    const double predicted =
        0.5 * step.alpha * step.alpha * step.direction.dot(fvp(step.direction));
    CHECK(predicted == doctest::Approx(cfg.delta_kl / 2.0).epsilon(0.2));
  }
  SUBCASE("trpo: accepted steps satisfy the KL constraint and improve") {
    GaussianMlpPolicy p = policy;
    Trpo algo(cfg);
    const Eigen::VectorXd logp_old = p.log_probs(batch.traj);
    const double loss_old = batch.advantages.mean();
    const auto stats = algo.update(batch, p);
    REQUIRE(stats.updated);
    CHECK(stats.mean_kl <= cfg.delta_kl);
    CHECK(surrogate_loss(batch, p, logp_old) > loss_old);
  }
  SUBCASE("trpo: surrogate at theta_old equals mean advantage") {
    const Eigen::VectorXd logp_old = policy.log_probs(batch.traj);
    CHECK(surrogate_loss(batch, policy, logp_old) ==
          doctest::Approx(batch.advantages.mean()).epsilon(1e-12));
  }
  SUBCASE("zero advantages: both leave the policy unchanged") {
    BatchSample zero = batch;
    zero.advantages.setZero();
    GaussianMlpPolicy p1 = policy, p2 = policy;
    CHECK(!Tnpg(cfg).update(zero, p1).updated);
    CHECK(p1.params() == policy.params());
    CHECK(!Trpo(cfg).update(zero, p2).updated);
    CHECK(p2.params() == policy.params());
  }
}

TEST_CASE("rwr") {
  Rng rng(17, 0);
  GaussianMlpPolicy policy(2, 1, {4}, rng);

  SUBCASE("weights subtract the minimum") {
    Eigen::VectorXd adv(2);
    adv << 1, 3;
    const Eigen::VectorXd w = Rwr::shifted_weights(adv);
    CHECK(w[0] == doctest::Approx(0.0));
    CHECK(w[1] == doctest::Approx(2.0));
  }
  SUBCASE("shift invariance: adding a constant changes nothing") {
    auto trajs = synthetic_trajs(2, 6, 2, 1, rng);
    BatchSample a = BatchSample::build(trajs, 0.99);
    BatchSample b = a;
    b.advantages.array() += 123.0;
    GaussianMlpPolicy pa = policy, pb = policy;
    Rwr(10, 1e-2).update(a, pa);
    Rwr(10, 1e-2).update(b, pb);
    // identical up to the round-off of shifting the advantages
    CHECK((pa.params() - pb.params()).lpNorm<Eigen::Infinity>() < 1e-9);
  }
  SUBCASE("constant advantages skip the update") {
    auto trajs = synthetic_trajs(2, 4, 2, 1, rng);
    BatchSample batch = BatchSample::build(trajs, 0.99);
    batch.advantages.setConstant(5.0);
    GaussianMlpPolicy p = policy;
    const auto stats = Rwr(10, 1e-2).update(batch, p);
    CHECK(!stats.updated);
    CHECK(p.params() == policy.params());
  }
  SUBCASE("all weight on one sample pulls its log-prob up") {
    auto trajs = synthetic_trajs(1, 4, 2, 1, rng);
    BatchSample batch = BatchSample::build(trajs, 0.99);
    batch.advantages << 0.0, 0.0, 0.0, 1.0;
    GaussianMlpPolicy p = policy;
    const double before = p.log_probs(batch.traj)[3];
    Rwr(10, 1e-2).update(batch, p);
    CHECK(p.log_probs(batch.traj)[3] > before);
  }
}

TEST_CASE("reps dual") {
  Rng rng(19, 0);
  const int m = 12, k = 5;
  Eigen::VectorXd rewards = rng.normal_vector(m);
  Eigen::MatrixXd dphi(m, k);
  for (int i = 0; i < m * k; ++i) dphi(i / k, i % k) = rng.normal();
  // center the feature differences; otherwise a direction with all-negative
  // projections makes the dual unbounded below, which trajectory data (where
  // per-episode feature differences telescope) does not produce
  dphi.rowwise() -= dphi.colwise().mean();
  const double delta_kl = 0.1;

  SUBCASE("identical Bellman errors: g = eta*delta + d") {
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(m, 2.5);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(m, k);
    for (double eta : {0.3, 1.0, 7.0})
      CHECK(Reps::dual_value(eta, Eigen::VectorXd::Zero(k), r, zero, delta_kl) ==
            doctest::Approx(eta * delta_kl + 2.5));
  }
  SUBCASE("zero step size, zero errors: g = 0") {
    CHECK(Reps::dual_value(1.7, Eigen::VectorXd::Zero(k),
                           Eigen::VectorXd::Zero(m),
                           Eigen::MatrixXd::Zero(m, k), 0.0) ==
          doctest::Approx(0.0));
  }
  SUBCASE("eta <= 0 is a domain error") {
    CHECK_THROWS_AS(Reps::dual_value(0.0, Eigen::VectorXd::Zero(k), rewards,
                                     dphi, delta_kl),
                    std::domain_error);
  }
  SUBCASE("analytic gradient matches finite differences") {
    const double eta = 0.8;
    const Eigen::VectorXd nu = 0.3 * rng.normal_vector(k);
    double d_eta;
    Eigen::VectorXd d_nu;
    Reps::dual_gradient(eta, nu, rewards, dphi, delta_kl, d_eta, d_nu);

    Eigen::VectorXd x(k + 1);
    x[0] = eta;
    x.tail(k) = nu;
    const Eigen::VectorXd fd = oracle::fd_gradient(
        [&](const Eigen::VectorXd& v) {
          return Reps::dual_value(v[0], v.tail(k), rewards, dphi, delta_kl);
        },
        x, 1e-6);
    Eigen::VectorXd analytic(k + 1);
    analytic[0] = d_eta;
    analytic.tail(k) = d_nu;
    CHECK(oracle::rel_error(analytic, fd) < 1e-6);
  }
  SUBCASE("dual value is invariant to duplicating the dataset") {
    const double eta = 1.3;
    const Eigen::VectorXd nu = rng.normal_vector(k);
    Eigen::VectorXd r2(2 * m);
    r2 << rewards, rewards;
    Eigen::MatrixXd d2(2 * m, k);
    d2 << dphi, dphi;
    CHECK(Reps::dual_value(eta, nu, rewards, dphi, delta_kl) ==
          doctest::Approx(Reps::dual_value(eta, nu, r2, d2, delta_kl)));
  }
  SUBCASE("weights are strictly positive and permutation-equivariant") {
    const Eigen::VectorXd w = Reps::sample_weights(0.7, rng.normal_vector(k),
                                                   rewards, dphi);
    CHECK((w.array() > 0.0).all());
    // reversing the dataset reverses the weights
    const Eigen::VectorXd rr = rewards.reverse();
    const Eigen::MatrixXd dr = dphi.colwise().reverse();
    const Eigen::VectorXd wr = Reps::sample_weights(0.7, Eigen::VectorXd(rng.normal_vector(k)), rr, dr);
    // recompute with the same nu for a strict check
    const Eigen::VectorXd nu = rng.normal_vector(k);
    const Eigen::VectorXd w1 = Reps::sample_weights(0.7, nu, rewards, dphi);
    const Eigen::VectorXd w2 = Reps::sample_weights(0.7, nu, rr, dr);
    CHECK((w1.reverse() - w2).norm() < 1e-14);
  }
  SUBCASE("dual minimization converges on a small dataset") {
    const auto sol = Reps::minimize_dual(rewards, dphi, delta_kl, 1e-5, 500);
    CHECK(sol.eta > 0.0);
    // the solution is a minimum: nudging parameters does not go lower
    const double v0 = Reps::dual_value(sol.eta, sol.nu, rewards, dphi, delta_kl);
    for (int trial = 0; trial < 10; ++trial) {
      const double eta2 = sol.eta * std::exp(0.05 * rng.normal());
      const Eigen::VectorXd nu2 = sol.nu + 0.05 * rng.normal_vector(k);
      CHECK(Reps::dual_value(eta2, nu2, rewards, dphi, delta_kl) >= v0 - 1e-4);
    }
  }
  SUBCASE("bandit dataset: weights concentrate on high rewards") {
    // two states (phi identical so nu drops out), actions with rewards 1 and 0
    Eigen::VectorXd r(4);
    r << 1.0, 0.0, 1.0, 0.0;
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 1);
    const auto sol = Reps::minimize_dual(r, zero, 0.5, 1e-8, 500);
    const Eigen::VectorXd w = Reps::sample_weights(sol.eta, sol.nu, r, zero);
    CHECK(w[0] > w[1]);
    CHECK(w[2] > w[3]);
    CHECK(w[0] == doctest::Approx(w[2]));
    // with a generous step size the good actions dominate
    const auto loose = Reps::minimize_dual(r, zero, 5.0, 1e-8, 2000);
    const Eigen::VectorXd wl =
        Reps::sample_weights(loose.eta, loose.nu, r, zero);
    CHECK(wl[1] / wl[0] < w[1] / w[0]);
  }
}

TEST_CASE("reps full update runs and respects the interface") {
  Rng rng(23, 0);
  GaussianMlpPolicy policy(2, 1, {4}, rng);
  auto trajs = synthetic_trajs(3, 8, 2, 1, rng);
  const BatchSample batch = BatchSample::build(trajs, 0.99);
  Reps::Config cfg;
  Reps algo(cfg);
  GaussianMlpPolicy p = policy;
  const auto stats = algo.update(batch, p);
  CHECK(stats.updated);
  CHECK(p.params() != policy.params());
  CHECK(std::isfinite(stats.mean_kl));

  SUBCASE("uniform weights reduce to unweighted maximum likelihood") {
    GaussianMlpPolicy a = policy, b = policy;
    weighted_ml_fit(a, batch.traj, Eigen::VectorXd::Ones(batch.size()), 5, 1e-2);
    weighted_ml_fit(b, batch.traj, Eigen::VectorXd::Constant(batch.size(), 9.0),
                    5, 1e-2);
    CHECK(a.params() == b.params());  // normalization removes the scale
  }
}
