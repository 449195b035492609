#include "coverage/baseline_lloyd.hpp"

namespace coverage {

WeightTable VoronoiAssignment::indicator() const {
  WeightTable table(owner.size(), agents);
  for (std::size_t k = 0; k < owner.size(); ++k) {
    table.column(static_cast<std::size_t>(owner[k]))[k] = 1.0;
  }
  return table;
}

VoronoiAssignment voronoi_assign(std::span<const Point> positions, const Grid& grid) {
  if (positions.empty()) throw ValidationError("voronoi_assign: at least one agent required");
  VoronoiAssignment out;
  out.agents = positions.size();
  out.owner.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point& q = grid.point(k);
    int best = 0;
    double best_d = (q - positions[0]).squaredNorm();
    for (std::size_t i = 1; i < positions.size(); ++i) {
      const double d = (q - positions[i]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    out.owner[k] = best;
  }
  return out;
}

std::vector<VoronoiCell> voronoi_cells(const Grid& grid, std::span<const double> density,
                                       const VoronoiAssignment& assignment) {
  if (density.size() != grid.size() || assignment.owner.size() != grid.size()) {
    throw ValidationError("voronoi_cells: density/assignment size does not match grid");
  }
  std::vector<double> mass(assignment.agents, 0.0);
  std::vector<Point> first(assignment.agents, Point::Zero());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto i = static_cast<std::size_t>(assignment.owner[k]);
    mass[i] += density[k];
    first[i] += density[k] * grid.point(k);
  }
  std::vector<VoronoiCell> cells(assignment.agents);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].mass = mass[i] * grid.cell_area();
    if (mass[i] > 0.0) cells[i].centroid = first[i] / mass[i];
  }
  return cells;
}

std::vector<Point> lloyd_control(std::span<const Point> positions, const Grid& grid,
                                 std::span<const double> density,
                                 const VoronoiAssignment& assignment, double gain) {
  if (!(gain > 0.0)) throw ValidationError("lloyd_control: gain must be positive");
  if (assignment.agents != positions.size()) {
    throw ValidationError("lloyd_control: assignment does not match swarm size");
  }
  const auto cells = voronoi_cells(grid, density, assignment);
  std::vector<Point> v(positions.size(), Point::Zero());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!cells[i].centroid) continue;
    v[i] = gain * cells[i].mass * (*cells[i].centroid - positions[i]);
  }
  return v;
}

}  // namespace coverage
