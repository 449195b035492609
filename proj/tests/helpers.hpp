#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "coverage/environment.hpp"
#include "coverage/sim_engine.hpp"

namespace test {

inline coverage::Domain unit_square(int res = 100) {
  coverage::Domain d;
  d.grid_resolution = res;
  return d;
}

inline coverage::BasisSet layout(double sigma = 0.1, double rho = 0.2, int res = 100) {
  return coverage::BasisSet::grid_layout(unit_square(res), 5, 5, sigma, rho);
}

/// 29960 on 1-based indices 7 and 9, `background` elsewhere.
inline Eigen::VectorXd two_bumps(double background) {
  Eigen::VectorXd a = Eigen::VectorXd::Constant(25, background);
  a[6] = 29960.0;
  a[8] = 29960.0;
  return a;
}

inline coverage::Environment separated_env(double sigma = 0.3, int res = 100) {
  return {unit_square(res), layout(sigma, 0.2, res), two_bumps(0.0)};
}

inline coverage::Environment random_env(std::mt19937_64& rng, int res = 100) {
  std::uniform_real_distribution<double> u(0.0, 100.0);
  Eigen::VectorXd a(25);
  for (auto& v : a) v = u(rng);
  return {unit_square(res), layout(0.1, 0.2, res), a};
}

inline coverage::Positions random_positions(std::mt19937_64& rng, std::size_t n,
                                            double lo = 0.02, double hi = 0.98) {
  std::uniform_real_distribution<double> u(lo, hi);
  coverage::Positions p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
  return p;
}

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(COVERAGE_SCENARIO_DIR) / (name + ".json");
}

}  // namespace test
