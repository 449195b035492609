// Randomized invariants over many seeds.

#include <algorithm>
#include <random>

#include "coverage/adaptive_estimator.hpp"
#include "coverage/baseline_lloyd.hpp"
#include "coverage/global_controller.hpp"
#include "coverage/network.hpp"
#include "coverage/ranking.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace coverage;

TEST_CASE("h_lambda is a bounded monotone weight") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(1e-3, 10.0);
  for (int t = 0; t < 200; ++t) {
    const double l = lam(rng);
    double prev = 1.0;
    CHECK(h_lambda(0, l) == 1.0);
    for (int r = 1; r < 30; ++r) {
      const double h = h_lambda(r, l);
      CHECK(h >= 0.0);
      CHECK(h <= prev);
      CHECK(h_lambda(r, l * 1.5) >= h);
      prev = h;
    }
  }
}

TEST_CASE("rank table counts strictly closer agents") {
  std::mt19937_64 rng(12);
  const auto grid = Grid(test::unit_square(15));
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng() % 12;
    const auto P = test::random_positions(rng, n, 0.0, 1.0);
    const auto ranks = compute_ranks(P, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      int zeros = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double di = (grid.point(k) - P[i]).squaredNorm();
        int closer = 0;
        for (std::size_t j = 0; j < n; ++j) closer += (grid.point(k) - P[j]).squaredNorm() < di;
        CHECK(ranks.rank(k, i) == closer);
        zeros += ranks.rank(k, i) == 0;
      }
      CHECK(zeros >= 1);
    }
  }
}

TEST_CASE("annealed cost bounds the Voronoi cost and grows with lambda") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto env = test::random_env(rng, 40);
    const auto P = test::random_positions(rng, 1 + rng() % 10);
    const double H = cost_conventional(P, env.grid(), env.density());
    double prev = H;
    for (double l : {0.01, 0.1, 0.5, 1.0, 4.0}) {
      const double Hp = cost_proposed(P, env.grid(), env.density(), l);
      CHECK(Hp >= prev * (1 - 1e-12));
      prev = Hp;
    }
  }
}

TEST_CASE("Voronoi cells partition the mass; Lloyd matches hard-weight W") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const auto env = test::random_env(rng, 40);
    const auto P = test::random_positions(rng, 2 + rng() % 10);
    const auto assign = voronoi_assign(P, env.grid());
    const auto cells = voronoi_cells(env.grid(), env.density(), assign);
    double mass = 0.0;
    for (const auto& c : cells) mass += c.mass;
    CHECK(mass == doctest::Approx(env.total_mass()).epsilon(1e-10));

    const auto v = lloyd_control(P, env.grid(), env.density(), assign, 1.0);
    const auto terms = coverage_terms(P, env.grid(), env.density(), assign.indicator());
    const auto annealed = coverage_terms(P, env.grid(), env.density(),
                                         WeightTable::annealed(compute_ranks(P, env.grid()), 0.3));
    for (std::size_t i = 0; i < P.size(); ++i) {
      CHECK((v[i] - terms.w[i]).norm() <= 1e-9 * (1 + terms.w[i].norm()));
      CHECK(terms.alpha[i] == doctest::Approx(cells[i].mass));
      CHECK(annealed.alpha[i] >= cells[i].mass * (1 - 1e-12));
    }
  }
}

TEST_CASE("estimator step respects the bound and the data matrix stays PSD") {
  std::mt19937_64 rng(15);
  const auto basis = test::layout(0.1);
  const auto d = test::unit_square();
  std::normal_distribution<double> n(0.0, 200.0);
  for (int t = 0; t < 10; ++t) {
    EstimatorGains gains;
    gains.a_min = 0.1 * t;
    auto st = EstimatorState::initial(Eigen::VectorXd::Constant(25, 1.0 + gains.a_min));
    for (int s = 0; s < 100; ++s) {
      const auto p = test::random_positions(rng, 1)[0];
      accumulate_data(st, basis, d, p, std::abs(n(rng)), 180.0, 0.01);
      Eigen::VectorXd rate(25);
      for (auto& v : rate) v = n(rng);
      project_and_step(st, rate, gains, 0.01);
      REQUIRE(st.a_hat.minCoeff() >= gains.a_min);
    }
    CHECK((st.Lambda - st.Lambda.transpose()).norm() == doctest::Approx(0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(st.Lambda);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("pure consensus preserves the network mean") {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(10.0, 100.0);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + rng() % 6;
    const auto graph = t % 2 ? NetworkGraph::path(n) : NetworkGraph::complete(n);
    EstimatorGains gains;
    gains.gamma = 0.0;
    gains.zeta = 0.2;
    std::vector<EstimatorState> states;
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd a(6);
      for (auto& v : a) v = u(rng);
      states.push_back(EstimatorState::initial(a));
    }
    auto mean = [&] {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(6);
      for (const auto& s : states) m += s.a_hat;
      return Eigen::VectorXd(m / static_cast<double>(n));
    };
    const Eigen::VectorXd m0 = mean();
    const Eigen::MatrixXd F = Eigen::MatrixXd::Zero(6, 6);
    for (int s = 0; s < 50; ++s) {
      std::vector<Eigen::VectorXd> snap;
      for (const auto& st : states) snap.push_back(st.a_hat);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> l(n);
        for (std::size_t j = 0; j < n; ++j) l[j] = graph.weight(i, j);
        project_and_step(states[i], pre_adaptation(states[i], F, snap, l, gains), gains, 0.05);
      }
    }
    CHECK((mean() - m0).norm() <= 1e-9 * m0.norm());
  }
}

TEST_CASE("F is symmetric PSD of rank at most 2") {
  std::mt19937_64 rng(17);
  const auto env = test::random_env(rng, 40);
  for (int t = 0; t < 5; ++t) {
    const auto P = test::random_positions(rng, 4);
    const auto F = compute_F(P, 0.5, 0, env.basis_table(), env.grid(), 0.1);
    CHECK((F - F.transpose()).norm() <= 1e-12 * F.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F);
    const auto& ev = eig.eigenvalues();
    CHECK(ev.minCoeff() >= -1e-9 * ev.maxCoeff());
    int big = 0;
    for (Eigen::Index j = 0; j < ev.size(); ++j) big += ev[j] > 1e-9 * ev.maxCoeff();
    CHECK(big <= 2);
  }
}
