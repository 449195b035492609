// Coverage costs and the annealed gradient control law for a known density.
//
// A density is passed as its grid values, so the same routines serve both
// the true field and an agent's estimate of it.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coverage/environment.hpp"
#include "coverage/ranking.hpp"
#include "coverage/types.hpp"

namespace coverage {

struct SwarmState {
  Positions positions;
  double time = 0.0;
  long step = 0;
};

/// W_i = sum_k w(k,i) (q_k - p_i) phi_k dq for one agent.
[[nodiscard]] Point weighted_moment(std::span<const Point> positions, const Grid& grid,
                                    std::span<const double> density, const WeightTable& weights,
                                    std::size_t i);

/// alpha_i = sum_k w(k,i) phi_k dq for one agent.
[[nodiscard]] double weighted_mass(const Grid& grid, std::span<const double> density,
                                   const WeightTable& weights, std::size_t i);

/// 1/2 sum_i sum_k w(k,i) |q_k - p_i|^2 phi_k dq.
[[nodiscard]] double weighted_cost(std::span<const Point> positions, const Grid& grid,
                                   std::span<const double> density, const WeightTable& weights);

/// Conventional Voronoi cost: every point is charged to its nearest agent.
[[nodiscard]] double cost_conventional(std::span<const Point> positions, const Grid& grid,
                                       std::span<const double> density);

/// Rank-weighted cost with ranks evaluated at `positions`.
[[nodiscard]] double cost_proposed(std::span<const Point> positions, const Grid& grid,
                                   std::span<const double> density, double lambda);
/// Same, with a frozen rank table (finite-difference checks).
[[nodiscard]] double cost_proposed(std::span<const Point> positions, const Grid& grid,
                                   std::span<const double> density, const RankTable& ranks,
                                   double lambda);

/// W_i, equal to minus the gradient of cost_proposed with respect to p_i.
/// The control input is u_i = epsilon * W_i.
[[nodiscard]] Point control_w(std::span<const Point> positions, const Grid& grid,
                              std::span<const double> density, double lambda, std::size_t i);
[[nodiscard]] Point control_w(std::span<const Point> positions, const Grid& grid,
                              std::span<const double> density, const RankTable& ranks,
                              double lambda, std::size_t i);

/// alpha_i, so that dW_i/dp_i = -alpha_i I.
[[nodiscard]] double grad_w_diag(std::span<const Point> positions, const Grid& grid,
                                 std::span<const double> density, double lambda, std::size_t i);
[[nodiscard]] double grad_w_diag(const Grid& grid, std::span<const double> density,
                                 const RankTable& ranks, double lambda, std::size_t i);

/// W_i and alpha_i for every agent in one pass.
struct CoverageTerms {
  std::vector<Point> w;
  std::vector<double> alpha;
};
[[nodiscard]] CoverageTerms coverage_terms(std::span<const Point> positions, const Grid& grid,
                                           std::span<const double> density,
                                           const WeightTable& weights);

}  // namespace coverage
