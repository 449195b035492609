// Voronoi / Lloyd baseline: every agent moves toward the mass centroid of
// its own cell.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coverage/environment.hpp"
#include "coverage/ranking.hpp"
#include "coverage/types.hpp"

namespace coverage {

/// owner[k] = nearest agent to grid point k (lowest index on a tie).
struct VoronoiAssignment {
  std::vector<int> owner;
  std::size_t agents = 0;

  /// 0/1 indicator weights, usable wherever annealed weights are.
  [[nodiscard]] WeightTable indicator() const;
};

[[nodiscard]] VoronoiAssignment voronoi_assign(std::span<const Point> positions,
                                               const Grid& grid);

struct VoronoiCell {
  double mass = 0.0;
  std::optional<Point> centroid;  // unset for a zero-mass cell
};

[[nodiscard]] std::vector<VoronoiCell> voronoi_cells(const Grid& grid,
                                                     std::span<const double> density,
                                                     const VoronoiAssignment& assignment);

/// v_i = k M_i (C_i - p_i); zero for a zero-mass cell (the agent stalls).
[[nodiscard]] std::vector<Point> lloyd_control(std::span<const Point> positions,
                                               const Grid& grid,
                                               std::span<const double> density,
                                               const VoronoiAssignment& assignment, double gain);

}  // namespace coverage
