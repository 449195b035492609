#include "coverage/global_controller.hpp"

#include <limits>

#include "coverage/parallel.hpp"

namespace coverage {

namespace {

void check_sizes(std::span<const Point> positions, const Grid& grid,
                 std::span<const double> density) {
  if (positions.empty()) throw ValidationError("controller: at least one agent required");
  if (density.size() != grid.size()) {
    throw ValidationError("controller: density size does not match grid");
  }
}

void check_weights(std::span<const Point> positions, const Grid& grid,
                   const WeightTable& weights) {
  if (weights.agents() != positions.size() || weights.grid_size() != grid.size()) {
    throw ValidationError("controller: weight table shape does not match swarm/grid");
  }
}

double agent_cost(const Point& p, const Grid& grid, std::span<const double> density,
                  std::span<const double> w) {
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double wk = w[k] * density[k];
    if (wk != 0.0) sum += wk * (grid.point(k) - p).squaredNorm();
  }
  return sum;
}

}  // namespace

Point weighted_moment(std::span<const Point> positions, const Grid& grid,
                      std::span<const double> density, const WeightTable& weights,
                      std::size_t i) {
  check_sizes(positions, grid, density);
  check_weights(positions, grid, weights);
  const Point& p = positions[i];
  const auto w = weights.column(i);
  Point sum = Point::Zero();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double wk = w[k] * density[k];
    if (wk != 0.0) sum += wk * (grid.point(k) - p);
  }
  return sum * grid.cell_area();
}

double weighted_mass(const Grid& grid, std::span<const double> density,
                     const WeightTable& weights, std::size_t i) {
  const auto w = weights.column(i);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) sum += w[k] * density[k];
  return sum * grid.cell_area();
}

double weighted_cost(std::span<const Point> positions, const Grid& grid,
                     std::span<const double> density, const WeightTable& weights) {
  check_sizes(positions, grid, density);
  check_weights(positions, grid, weights);
  double total = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    total += agent_cost(positions[i], grid, density, weights.column(i));
  }
  return 0.5 * total * grid.cell_area();
}

double cost_conventional(std::span<const Point> positions, const Grid& grid,
                         std::span<const double> density) {
  check_sizes(positions, grid, density);
  double total = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (density[k] == 0.0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : positions) best = std::min(best, (grid.point(k) - p).squaredNorm());
    total += best * density[k];
  }
  return 0.5 * total * grid.cell_area();
}

double cost_proposed(std::span<const Point> positions, const Grid& grid,
                     std::span<const double> density, double lambda) {
  return cost_proposed(positions, grid, density, compute_ranks(positions, grid), lambda);
}

double cost_proposed(std::span<const Point> positions, const Grid& grid,
                     std::span<const double> density, const RankTable& ranks, double lambda) {
  return weighted_cost(positions, grid, density, WeightTable::annealed(ranks, lambda));
}

Point control_w(std::span<const Point> positions, const Grid& grid,
                std::span<const double> density, double lambda, std::size_t i) {
  return control_w(positions, grid, density, compute_ranks(positions, grid), lambda, i);
}

Point control_w(std::span<const Point> positions, const Grid& grid,
                std::span<const double> density, const RankTable& ranks, double lambda,
                std::size_t i) {
  return weighted_moment(positions, grid, density, WeightTable::annealed(ranks, lambda), i);
}

double grad_w_diag(std::span<const Point> positions, const Grid& grid,
                   std::span<const double> density, double lambda, std::size_t i) {
  check_sizes(positions, grid, density);
  return grad_w_diag(grid, density, compute_ranks(positions, grid), lambda, i);
}

double grad_w_diag(const Grid& grid, std::span<const double> density, const RankTable& ranks,
                   double lambda, std::size_t i) {
  return weighted_mass(grid, density, WeightTable::annealed(ranks, lambda), i);
}

CoverageTerms coverage_terms(std::span<const Point> positions, const Grid& grid,
                             std::span<const double> density, const WeightTable& weights) {
  check_sizes(positions, grid, density);
  check_weights(positions, grid, weights);
  const std::size_t n = positions.size();
  CoverageTerms terms{std::vector<Point>(n, Point::Zero()), std::vector<double>(n, 0.0)};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      terms.w[i] = weighted_moment(positions, grid, density, weights, i);
      terms.alpha[i] = weighted_mass(grid, density, weights, i);
    }
  });
  return terms;
}

}  // namespace coverage
