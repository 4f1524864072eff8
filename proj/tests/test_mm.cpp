#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "dense_oracle.hpp"
#include "mmnetloc/cost.hpp"
#include "mmnetloc/mm.hpp"
#include "mmnetloc/random.hpp"
#include "test_util.hpp"

using namespace mmnetloc;
using testutil::DenseOps;

TEST_CASE("step constant formula on a hand example") {
  // path 0-1-2, one anchor linked to nodes 0 and 2: delta_max 2, max links 1
  Eigen::VectorXd truth(6);
  truth << 0.0, 0.0, 0.5, 0.0, 1.0, 0.0;
  Eigen::VectorXd a(2);
  a << 0.5, 1.0;
  const Network net = make_network(3, 2, {{0, 1}, {1, 2}}, {a}, {{0}, {}, {0}}, truth);
  CHECK(lipschitz_bound(net) == 2.0 * 2 + 1 + 2);
}

TEST_CASE("step constant dominates the top curvature of the quadratic") {
  for (int trial = 0; trial < 60; ++trial) {
    auto rng = make_rng(mix_seed(640, trial));
    std::uniform_int_distribution<int> n_dist(2, 10);
    const Network net = testutil::random_network(rng, n_dist(rng), 2 + trial % 2);
    const DenseOps ops(net);
    CHECK(lipschitz_bound(net) >= ops.lambda_max_power() - 1e-9);
  }
}

TEST_CASE("quadratic upper bound with the step constant majorizes the cost") {
  auto rng = make_rng(mix_seed(641, 0));
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const testutil::Instance inst = testutil::random_instance(1600 + trial, 2, 10);
    const double L = lipschitz_bound(inst.net);
    const DenseOps ops(inst.net);
    for (int pair = 0; pair < 25; ++pair) {
      Eigen::VectorXd za(ops.M.rows()), zb(ops.M.rows());
      for (Eigen::Index c = 0; c < za.size(); ++c) {
        za(c) = unit(rng);
        zb(c) = unit(rng);
      }
      const StateZ sa = ops.unstack(za);
      const double fa = cost_z(inst.net, inst.meas, sa);
      const double fb = cost_z(inst.net, inst.meas, ops.unstack(zb));
      const Eigen::VectorXd g = ops.stack(grad_z(inst.net, inst.meas, sa));
      const double surrogate = fa + g.dot(zb - za) + 0.5 * L * (zb - za).squaredNorm();
      CHECK(fb <= surrogate + 1e-10 * std::max(1.0, std::abs(surrogate)));
    }
  }
}

TEST_CASE("one sweep equals the dense projected gradient step") {
  auto rng = make_rng(mix_seed(642, 0));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const testutil::Instance inst = testutil::random_instance(1700 + trial, 2, 9);
    const double L = lipschitz_bound(inst.net);
    const DenseOps ops(inst.net);
    StateZ z = reduce_to_x(inst.net, inst.meas, inst.x0);
    // also start from infeasible states; the step must match regardless
    if (trial % 2) {
      for (Eigen::Index c = 0; c < z.y.size(); ++c) z.y(c) += 0.3 * unit(rng);
      for (Eigen::Index c = 0; c < z.w.size(); ++c) z.w(c) += 0.3 * unit(rng);
    }
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd dense_next =
          ops.projected_step(inst.net, inst.meas, ops.stack(z), L);
      z = mm_step(inst.net, inst.meas, z, L);
      const double scale = std::max(1.0, dense_next.cwiseAbs().maxCoeff());
      CHECK((ops.stack(z) - dense_next).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("cost never increases along the iteration") {
  int instances = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double sigma = (trial % 3 == 0) ? 0.0 : (trial % 3 == 1 ? 0.01 : 0.1);
    const testutil::Instance inst = testutil::random_instance(1800 + trial, 2, 15, sigma);
    const double L = lipschitz_bound(inst.net);
    StateZ z = reduce_to_x(inst.net, inst.meas, inst.x0);
    double prev = cost_z(inst.net, inst.meas, z);
    for (int t = 0; t < 60; ++t) {
      z = mm_step(inst.net, inst.meas, z, L);
      const double cur = cost_z(inst.net, inst.meas, z);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
    ++instances;
  }
  CHECK(instances == 60);
}

TEST_CASE("windowed stopping rule") {
  SUBCASE("stops after exactly `window` flat iterations") {
    StopRule rule(1e-3, 3);
    CHECK_FALSE(rule.should_stop(100.0));
    CHECK_FALSE(rule.should_stop(50.0));   // big improvement
    CHECK_FALSE(rule.should_stop(49.999)); // flat 1
    CHECK_FALSE(rule.should_stop(49.998)); // flat 2
    CHECK(rule.should_stop(49.997));       // flat 3 -> stop
  }
  SUBCASE("a large improvement resets the streak") {
    StopRule rule(1e-3, 2);
    CHECK_FALSE(rule.should_stop(10.0));
    CHECK_FALSE(rule.should_stop(9.9999));  // flat 1
    CHECK_FALSE(rule.should_stop(5.0));     // resets
    CHECK_FALSE(rule.should_stop(4.9999));  // flat 1
    CHECK(rule.should_stop(4.9998));        // flat 2
  }
  SUBCASE("works at cost zero") {
    StopRule rule(1e-9, 2);
    CHECK_FALSE(rule.should_stop(0.0));
    CHECK_FALSE(rule.should_stop(0.0));
    CHECK(rule.should_stop(0.0));
  }
  SUBCASE("noise-floor wander below the absolute floor counts as flat") {
    StopRule rule(1e-9, 3);
    CHECK_FALSE(rule.should_stop(0.0));
    CHECK_FALSE(rule.should_stop(1.5e-32));  // up a hair
    CHECK_FALSE(rule.should_stop(1.0e-32));  // "33% better", still noise
    CHECK(rule.should_stop(1.9e-32));
  }
}

TEST_CASE("solver trace layout and stop behavior") {
  const testutil::Instance inst = testutil::random_instance(1950, 10, 10);
  SolverConfig cfg;
  cfg.max_iters = 400;
  const SolveResult res = solve(inst.net, inst.meas, inst.x0, cfg);

  REQUIRE(res.trace.size() >= 2);
  CHECK(res.trace.front().iter == 0);
  CHECK(res.trace.front().comm_scalars == 0);
  const std::int64_t per_iter = static_cast<std::int64_t>(inst.net.p) * inst.net.n;
  for (std::size_t k = 0; k < res.trace.size(); ++k) {
    CHECK(res.trace[k].iter == static_cast<int>(k));
    CHECK(res.trace[k].comm_scalars == static_cast<std::int64_t>(k) * per_iter);
    REQUIRE(res.trace[k].cost_z.has_value());
    if (k > 0) CHECK(*res.trace[k].cost_z <= *res.trace[k - 1].cost_z + 1e-12);
  }
  CHECK(res.x_hat.size() == inst.net.n * inst.net.p);

  // a run that stops early by the rule is shorter than one with the rule
  // disabled via a zero-improvement threshold window longer than max_iters
  SolverConfig exhaustive = cfg;
  exhaustive.stop_window = 1000;
  const SolveResult full = solve(inst.net, inst.meas, inst.x0, exhaustive);
  CHECK(full.trace.size() == static_cast<std::size_t>(cfg.max_iters) + 1);
  CHECK(res.trace.size() <= full.trace.size());
}

TEST_CASE("noiseless truth-started run ends at zero cost") {
  const testutil::Instance base = testutil::random_instance(2020, 8, 8, 0.0);
  REQUIRE(base.net.true_positions.has_value());
  SolverConfig cfg;
  const SolveResult res =
      solve(base.net, base.meas, *base.net.true_positions, cfg);
  CHECK(res.trace.back().cost_per_sensor <= 1e-18);
  CHECK(*res.trace.back().cost_z <= 1e-18);
  // started at the optimum, the stop rule fires after its window
  CHECK(res.trace.size() <= static_cast<std::size_t>(cfg.stop_window) + 2);
}

TEST_CASE("step-constant override validation") {
  const testutil::Instance inst = testutil::random_instance(2100, 5, 5);
  const double bound = lipschitz_bound(inst.net);

  SolverConfig cfg;
  cfg.lipschitz_override = bound * 2.0;
  CHECK(resolve_lipschitz(inst.net, cfg) == bound * 2.0);

  cfg.lipschitz_override = bound * 0.5;
  CHECK_THROWS_AS(resolve_lipschitz(inst.net, cfg), std::invalid_argument);
  cfg.allow_unsafe_lipschitz = true;
  CHECK(resolve_lipschitz(inst.net, cfg) == bound * 0.5);

  cfg.lipschitz_override = -1.0;
  CHECK_THROWS_AS(resolve_lipschitz(inst.net, cfg), std::invalid_argument);

  SolverConfig defaults;
  CHECK(resolve_lipschitz(inst.net, defaults) == bound);

  // a larger step constant preserves descent
  SolverConfig big;
  big.lipschitz_override = bound * 3.0;
  big.max_iters = 50;
  const SolveResult res = solve(inst.net, inst.meas, inst.x0, big);
  for (std::size_t k = 1; k < res.trace.size(); ++k)
    CHECK(*res.trace[k].cost_z <= *res.trace[k - 1].cost_z + 1e-12);
}

TEST_CASE("per-sensor error") {
  Eigen::VectorXd truth(4);
  truth << 0.0, 0.0, 1.0, 0.0;
  const Network net = make_network(2, 2, {{0, 1}}, {}, {{}, {}}, truth);
  Eigen::VectorXd x(4);
  x << 3.0, 4.0, 1.0, 0.0;  // node 0 off by 5, node 1 exact
  CHECK(*per_sensor_error(net, x) == doctest::Approx(2.5).epsilon(1e-15));

  const Network blind = make_network(2, 2, {{0, 1}}, {}, {{}, {}}, std::nullopt);
  CHECK_FALSE(per_sensor_error(blind, x).has_value());
}

TEST_CASE("degenerate solver inputs are rejected") {
  const testutil::Instance inst = testutil::random_instance(2222, 4, 4);
  SolverConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(solve(inst.net, inst.meas, inst.x0, cfg), std::invalid_argument);
  SolverConfig ok;
  CHECK_THROWS_AS(solve(inst.net, inst.meas, Eigen::VectorXd::Zero(1), ok),
                  std::invalid_argument);
  CHECK_THROWS_AS(mm_step(inst.net, inst.meas, reduce_to_x(inst.net, inst.meas, inst.x0),
                          0.0),
                  std::invalid_argument);
}
