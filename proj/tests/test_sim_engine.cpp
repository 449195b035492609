#include <cmath>
#include <limits>
#include <random>

#include "coverage/global_controller.hpp"
#include "coverage/sim_engine.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace coverage;

namespace {

ScenarioConfig small_known(Method method = Method::Proposed) {
  ScenarioConfig c;
  c.name = "small";
  c.environment.domain = test::unit_square(40);
  c.environment.sigma = 0.3;
  c.environment.coeffs = test::two_bumps(50.0);
  c.initial.kind = InitialPositions::Kind::Random;
  c.initial.count = 5;
  c.method = method;
  c.max_steps = 60;
  return c;
}

ScenarioConfig small_unknown(Method method = Method::Proposed) {
  ScenarioConfig c = small_known(method);
  c.env_mode = EnvMode::Unknown;
  c.environment.coeffs = test::two_bumps(0.0);
  c.epsilon = 0.9;
  c.schedule.mode = ScheduleMode::UnknownWarmup;
  c.schedule.min_warmup_steps = 20;
  c.estimator.weight.tau_w = 0.3;
  return c;
}

}  // namespace

TEST_CASE("max_steps = 0 yields only the initial record") {
  auto c = small_known();
  c.max_steps = 0;
  const auto t = run(c);
  REQUIRE(t.records.size() == 1);
  CHECK(t.summary.steps_executed == 0);
  CHECK(t.summary.path_length == 0.0);
  CHECK(t.records[0].time == 0.0);
}

TEST_CASE("record count is steps executed + 1") {
  auto c = small_known();
  c.max_steps = 25;
  const auto t = run(c);
  CHECK(t.records.size() == 26);
  CHECK(t.summary.steps_executed == 25);
  CHECK(t.records.back().time == doctest::Approx(0.25));
}

TEST_CASE("zero density: lloyd stalls and proposed has zero control") {
  for (Method m : {Method::Lloyd, Method::Proposed}) {
    auto c = small_known(m);
    c.environment.coeffs = Eigen::VectorXd::Zero(25);
    c.max_steps = 5;
    Simulation sim(c);
    const auto start = sim.state().positions;
    for (int k = 0; k < 5; ++k) sim.step();
    CHECK(sim.state().positions == start);
    CHECK(sim.state().time == doctest::Approx(0.05));
    if (m == Method::Lloyd) CHECK(sim.lloyd_gain() == c.epsilon);
  }
}

TEST_CASE("agent already optimal converges within the window") {
  ScenarioConfig c;
  c.environment.domain = test::unit_square(40);
  c.environment.coeffs = Eigen::VectorXd::Zero(25);
  c.environment.coeffs[12] = 100.0;  // single bump at (0.5, 0.5)
  c.initial.points = {Point(0.5, 0.5)};
  c.schedule.lambda_s = 0.01;
  c.max_steps = 30;
  c.convergence.stop = true;
  const auto t = run(c);
  REQUIRE(t.summary.converged_at_step);
  CHECK(*t.summary.converged_at_step == 1);
  CHECK(t.summary.steps_executed == c.convergence.window);
}

TEST_CASE("one Euler step has O(dt^2) local error against sub-stepping") {
  auto c = small_known();
  c.environment.domain = test::unit_square(60);
  c.schedule.lambda_f = 0.0;
  c.schedule.lambda_s = 1.0;
  c.initial.kind = InitialPositions::Kind::Explicit;
  c.initial.points = {{0.2, 0.7}, {0.45, 0.5}, {0.8, 0.8}, {0.6, 0.15}};
  auto local_error = [&](double dt) {
    auto coarse = c;
    coarse.dt = dt;
    Simulation one(coarse);
    one.step();
    auto fine = c;
    fine.dt = dt / 10;
    Simulation ten(fine);
    for (int k = 0; k < 10; ++k) ten.step();
    double e = 0.0;
    for (std::size_t i = 0; i < c.initial.points.size(); ++i)
      e = std::max(e, (one.state().positions[i] - ten.state().positions[i]).norm());
    return e;
  };
  const double e1 = local_error(0.01);
  const double e2 = local_error(0.005);
  CHECK(e1 > 0.0);
  // halving dt quarters a second-order local error
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("path_length") {
  SimulationTrace t;
  for (int k = 0; k <= 10; ++k) {
    StepRecord r;
    r.positions = {Point(0.1 + 0.02 * k, 0.5), Point(0.3, 0.3)};
    t.records.push_back(r);
  }
  CHECK(path_length(t) == doctest::Approx(0.2));
  CHECK(path_length(t, 5) == doctest::Approx(0.1));
  t.records.resize(1);
  CHECK(path_length(t) == 0.0);
  t.records.clear();
  CHECK_THROWS_AS((void)path_length(t), ValidationError);
}

TEST_CASE("identical config and seed give identical traces") {
  auto c = small_unknown();
  c.max_steps = 30;
  const auto a = run(c);
  const auto b = run(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].positions == b.records[k].positions);
    CHECK(a.records[k].cost_proposed == b.records[k].cost_proposed);
    CHECK(a.records[k].a_hat == b.records[k].a_hat);
  }
  auto other = c;
  other.seed = 2;
  CHECK(run(other).records[0].positions != a.records[0].positions);
}

TEST_CASE("permuting agents permutes trajectories") {
  auto c = small_known();
  c.initial.kind = InitialPositions::Kind::Explicit;
  c.initial.points = {{0.1, 0.9}, {0.4, 0.6}, {0.85, 0.7}, {0.3, 0.2}, {0.6, 0.45}};
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  auto permuted = c;
  permuted.initial.points.clear();
  for (auto j : perm) permuted.initial.points.push_back(c.initial.points[j]);
  const auto a = run(c);
  const auto b = run(permuted);
  for (std::size_t k = 0; k < a.records.size(); k += 10) {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK(b.records[k].positions[i].isApprox(a.records[k].positions[perm[i]], 1e-12));
    }
  }
}

TEST_CASE("non-finite controls abort the step") {
  auto c = small_known();
  c.environment.coeffs = Eigen::VectorXd::Constant(25, std::numeric_limits<double>::max());
  c.lloyd_gain = 1.0;
  Simulation sim(c);
  CHECK_THROWS_AS(sim.step(), std::runtime_error);
}

TEST_CASE("leaving the domain is an error when clamping is off") {
  auto c = small_known();
  c.environment.coeffs = test::two_bumps(50.0);
  c.epsilon = 50.0;
  c.clamp_to_domain = false;
  c.initial.kind = InitialPositions::Kind::Explicit;
  c.initial.points = {{0.98, 0.98}};
  c.environment.coeffs[24] = 0.0;
  Simulation sim(c);
  CHECK_THROWS_WITH_AS(sim.step(), doctest::Contains("left the domain"), std::runtime_error);

  c.clamp_to_domain = true;
  Simulation clamped(c);
  for (int k = 0; k < 20; ++k) {
    clamped.step();
    CHECK(clamped.environment().domain().contains(clamped.state().positions[0]));
  }
}

TEST_CASE("config validation") {
  auto c = small_known();
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_known();
  c.schedule.mode = ScheduleMode::UnknownWarmup;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_unknown();
  c.estimator.a_hat_init = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_unknown();
  c.initial.kind = InitialPositions::Kind::Explicit;
  c.initial.points.clear();
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_unknown();
  c.network.kind = NetworkSpec::Kind::Explicit;
  c.network.weights = Eigen::MatrixXd::Zero(5, 5);
  CHECK_THROWS_AS(Simulation{c}, ValidationError);  // disconnected
}

TEST_CASE("lloyd gain calibration matches the largest initial speeds") {
  auto c = small_known(Method::Lloyd);
  Simulation lloyd(c);
  auto p = c;
  p.method = Method::Proposed;
  Simulation prop(p);
  auto vmax = [](const std::vector<Point>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, x.norm());
    return m;
  };
  CHECK(vmax(lloyd.record().controls) == doctest::Approx(vmax(prop.record().controls)));
  c.lloyd_gain = 2.5;
  CHECK(Simulation(c).lloyd_gain() == 2.5);
}

TEST_CASE("unknown mode: bounds, learning switch and arming") {
  for (Method m : {Method::Proposed, Method::Lloyd}) {
    auto c = small_unknown(m);
    c.max_steps = 120;
    Simulation sim(c);
    CHECK_FALSE(sim.convergence_armed());
    const auto t = run(sim);
    for (const auto& r : t.records) {
      REQUIRE(r.a_hat.size() == 5);
      for (const auto& a : r.a_hat) CHECK(a.minCoeff() >= c.estimator.gains.a_min);
    }
    CHECK(sim.convergence_armed());
    if (m == Method::Proposed) {
      REQUIRE(t.summary.lambda_switch_step);
      CHECK(*t.summary.lambda_switch_step >= c.schedule.min_warmup_steps);
    }
    // data collection stops at tau_w
    const auto Lambda_end = sim.estimators()[0].Lambda;
    CHECK(Lambda_end.trace() > 0.0);
  }
}

TEST_CASE("random initial positions stay inside the sampling box") {
  InitialPositions init;
  init.kind = InitialPositions::Kind::Random;
  init.count = 50;
  init.lower = {0.2, 0.6};
  init.upper = {0.4, 0.9};
  const auto P = init.generate(9);
  CHECK(P.size() == 50);
  for (const auto& p : P) {
    CHECK(p.x() >= 0.2);
    CHECK(p.x() <= 0.4);
    CHECK(p.y() >= 0.6);
    CHECK(p.y() <= 0.9);
  }
  CHECK(init.generate(9) == P);
}
