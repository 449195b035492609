#include "coverage/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "coverage/adaptive_estimator.hpp"
#include "coverage/global_controller.hpp"
#include "coverage/network.hpp"
#include "coverage/ranking.hpp"

namespace coverage {

namespace {

struct Fixture {
  Environment env;
  std::mt19937_64 rng;

  Fixture(std::uint64_t seed, int res)
      : env(make_env(seed, res)), rng(seed + 1) {}

  static Environment make_env(std::uint64_t seed, int res) {
    Domain d;
    d.grid_resolution = res;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    Eigen::VectorXd a(25);
    for (auto& v : a) v = u(rng);
    return Environment(d, BasisSet::grid_layout(d, 5, 5, 0.1, 0.2), a);
  }

  Positions random_positions(std::size_t n) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    Positions p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
    return p;
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CheckResult gradient_identity(Fixture& f) {
  double worst = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    auto P = f.random_positions(5);
    const auto ranks = compute_ranks(P, f.env.grid());
    for (double lambda : {1.0, 0.1}) {
      for (std::size_t i = 0; i < P.size(); ++i) {
        const Point w = control_w(P, f.env.grid(), f.env.density(), ranks, lambda, i);
        Point fd;
        for (int c = 0; c < 2; ++c) {
          auto plus = P;
          auto minus = P;
          plus[i][c] += h;
          minus[i][c] -= h;
          fd[c] = -(cost_proposed(plus, f.env.grid(), f.env.density(), ranks, lambda) -
                    cost_proposed(minus, f.env.grid(), f.env.density(), ranks, lambda)) /
                  (2 * h);
        }
        worst = std::max(worst, (w - fd).norm() / std::max(w.norm(), 1e-300));
      }
    }
  }
  return {"gradient identity (W_i = -dH/dp_i)", worst <= 1e-4, "max rel err " + fmt(worst)};
}

CheckResult limit_monotone(Fixture& f) {
  bool ok = true;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = f.random_positions(10);
    const double H = cost_conventional(P, f.env.grid(), f.env.density());
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {1.0, 0.3, 0.1, 0.03}) {
      const double gap = std::abs(cost_proposed(P, f.env.grid(), f.env.density(), lambda) - H);
      ok = ok && gap <= prev;
      prev = gap;
    }
    worst_rel = std::max(worst_rel, prev / H);
  }
  ok = ok && worst_rel <= 1e-9;
  return {"annealed cost -> Voronoi cost", ok, "rel gap at lambda=0.03 " + fmt(worst_rel)};
}

CheckResult hessian_structure(Fixture& f) {
  const auto P = f.random_positions(3);
  const auto ranks = compute_ranks(P, f.env.grid());
  const double lambda = 0.5;
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double a = grad_w_diag(f.env.grid(), f.env.density(), ranks, lambda, i);
    Eigen::Matrix2d J;
    for (int c = 0; c < 2; ++c) {
      auto plus = P;
      auto minus = P;
      plus[i][c] += h;
      minus[i][c] -= h;
      J.col(c) = (control_w(plus, f.env.grid(), f.env.density(), ranks, lambda, i) -
                  control_w(minus, f.env.grid(), f.env.density(), ranks, lambda, i)) /
                 (2 * h);
    }
    worst = std::max(worst, (J + a * Eigen::Matrix2d::Identity()).norm() / a);
  }
  return {"dW_i/dp_i = -alpha_i I", worst <= 1e-4, "max rel err " + fmt(worst)};
}

CheckResult projection_safety(Fixture& f) {
  EstimatorGains gains;
  gains.a_min = 0.5;
  auto state = EstimatorState::initial(Eigen::VectorXd::Constant(25, 1.0));
  std::normal_distribution<double> n(0.0, 50.0);
  double lowest = 1e300;
  for (int s = 0; s < 2000; ++s) {
    Eigen::VectorXd rate(25);
    for (auto& v : rate) v = n(f.rng);
    project_and_step(state, rate, gains, 0.01);
    lowest = std::min(lowest, state.a_hat.minCoeff());
  }
  return {"projection keeps a_hat >= a_min", lowest >= gains.a_min, "min a_hat " + fmt(lowest)};
}

CheckResult consensus_contraction(Fixture& f) {
  const std::size_t n = 6;
  const auto graph = NetworkGraph::path(n);
  EstimatorGains gains;
  gains.gamma = 0.0;
  gains.zeta = 0.5;
  const double dt = 0.1;
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<EstimatorState> states;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd a(4);
    for (auto& v : a) v = u(f.rng);
    states.push_back(EstimatorState::initial(a));
  }
  auto spread = [&] {
    double d = 0.0;
    for (const auto& a : states)
      for (const auto& b : states) d = std::max(d, (a.a_hat - b.a_hat).norm());
    return d;
  };
  bool ok = gains.zeta * dt * graph.laplacian_norm() < 2.0;
  double prev = spread();
  const double first = prev;
  const Eigen::MatrixXd F = Eigen::MatrixXd::Zero(4, 4);
  for (int s = 0; s < 200; ++s) {
    std::vector<Eigen::VectorXd> snap;
    for (const auto& st : states) snap.push_back(st.a_hat);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> l(n);
      for (std::size_t j = 0; j < n; ++j) l[j] = graph.weight(i, j);
      project_and_step(states[i], pre_adaptation(states[i], F, snap, l, gains), gains, dt);
    }
    const double now = spread();
    ok = ok && now <= prev * (1 + 1e-12);
    prev = now;
  }
  return {"consensus contracts disagreement", ok && prev < first,
          "spread " + fmt(first) + " -> " + fmt(prev)};
}

CheckResult data_consistency(Fixture& f) {
  auto state = EstimatorState::initial(Eigen::VectorXd::Zero(25));
  const auto P = f.random_positions(10);
  for (const auto& p : P) {
    accumulate_data(state, f.env.basis(), f.env.domain(), p, f.env.density_at(p), 180.0, 0.01);
  }
  const double rel = (state.Lambda * f.env.coeffs() - state.Upsilon).norm() /
                     std::max(state.Upsilon.norm(), 1e-300);
  return {"noiseless data integrals: Lambda a = Upsilon", rel <= 1e-8, "rel residual " + fmt(rel)};
}

CheckResult rank_equivariance(Fixture& f) {
  auto P = f.random_positions(7);
  const auto ranks = compute_ranks(P, f.env.grid());
  std::vector<std::size_t> perm(P.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), f.rng);
  Positions Q;
  for (auto j : perm) Q.push_back(P[j]);
  const auto permuted = compute_ranks(Q, f.env.grid());
  bool ok = true;
  for (std::size_t k = 0; k < f.env.grid().size() && ok; ++k) {
    for (std::size_t i = 0; i < Q.size(); ++i) ok = ok && permuted.rank(k, i) == ranks.rank(k, perm[i]);
  }
  return {"rank table is permutation-equivariant", ok, ok ? "ok" : "mismatch"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, int grid_resolution) {
  Fixture f(seed, grid_resolution);
  std::vector<CheckResult> out;
  out.push_back(gradient_identity(f));
  out.push_back(limit_monotone(f));
  out.push_back(hessian_structure(f));
  out.push_back(projection_safety(f));
  out.push_back(consensus_contraction(f));
  out.push_back(data_consistency(f));
  out.push_back(rank_equivariance(f));
  return out;
}

}  // namespace coverage
