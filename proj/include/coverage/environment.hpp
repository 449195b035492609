// Bounded rectangular domain, truncated-Gaussian basis model of the density
// field, and midpoint-rule integration over a uniform grid.
//
// Every integral in the library runs over the same Grid so that costs,
// gradients and finite-difference checks are consistent to rounding error.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coverage/types.hpp"

namespace coverage {

/// Axis-aligned box [lower, upper] sampled on a resolution x resolution grid.
struct Domain {
  Point lower{0.0, 0.0};
  Point upper{1.0, 1.0};
  int grid_resolution = 100;

  void validate() const;
  [[nodiscard]] bool contains(const Point& p) const noexcept;
  [[nodiscard]] Point clamp(const Point& p) const noexcept;
};

/// Midpoint sample points of a Domain; point k = iy * resolution + ix.
class Grid {
 public:
  explicit Grid(const Domain& domain);

  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] const Point& point(std::size_t k) const { return points_[k]; }
  [[nodiscard]] std::span<const Point> points() const noexcept { return points_; }
  [[nodiscard]] double cell_area() const noexcept { return cell_area_; }
  [[nodiscard]] Point spacing() const noexcept { return spacing_; }

 private:
  Domain domain_;
  std::vector<Point> points_;
  Point spacing_;
  double cell_area_;
};

/// Riemann sum  sum_k f(q_k) * dq.
[[nodiscard]] double integrate(const Grid& grid, std::span<const double> field);

/// Truncated Gaussian bumps
///   K_j(q) = G_j(q) - G_trunc  for |q - mu_j| < rho_trunc, else 0,
///   G_j(q) = exp(-|q - mu_j|^2 / (2 sigma^2)) / (sigma sqrt(2 pi)).
class BasisSet {
 public:
  BasisSet(std::vector<Point> means, double sigma, double rho_trunc);

  /// Means at the cell centres of a cells_x x cells_y partition of the
  /// domain, numbered row-major from the lower-left cell (index 0).
  static BasisSet grid_layout(const Domain& domain, int cells_x, int cells_y,
                              double sigma, double rho_trunc);

  [[nodiscard]] std::size_t size() const noexcept { return means_.size(); }
  [[nodiscard]] const std::vector<Point>& means() const noexcept { return means_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double rho_trunc() const noexcept { return rho_trunc_; }
  [[nodiscard]] double g_trunc() const noexcept { return g_trunc_; }
  /// Value of every basis function at its own mean.
  [[nodiscard]] double peak() const noexcept;

  /// Single component; no domain check.
  [[nodiscard]] double component(std::size_t j, const Point& q) const noexcept;

 private:
  std::vector<Point> means_;
  double sigma_;
  double rho_trunc_;
  double g_trunc_;
};

/// Basis vector K(point). Throws std::domain_error outside the domain.
[[nodiscard]] Eigen::VectorXd eval_basis(const BasisSet& basis, const Domain& domain,
                                         const Point& point);

/// K(point)^T coeffs. Throws std::invalid_argument for negative coefficients.
[[nodiscard]] double eval_density(const BasisSet& basis, const Domain& domain,
                                  const Point& point, const Eigen::VectorXd& coeffs);

/// Basis values at every grid point, stored sparsely (each point sees only
/// the few bumps whose truncation disk covers it).
class BasisTable {
 public:
  struct Entry {
    int index;
    double value;
  };

  BasisTable(const Grid& grid, const BasisSet& basis);

  [[nodiscard]] std::size_t grid_size() const noexcept { return offsets_.size() - 1; }
  [[nodiscard]] std::size_t basis_size() const noexcept { return basis_size_; }
  [[nodiscard]] std::span<const Entry> at(std::size_t k) const {
    return {entries_.data() + offsets_[k], entries_.data() + offsets_[k + 1]};
  }

  /// Grid values of K^T coeffs.
  [[nodiscard]] std::vector<double> combine(const Eigen::VectorXd& coeffs) const;

 private:
  std::size_t basis_size_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

/// Ground-truth environment: grid, basis, coefficients and the cached
/// density on the grid. Immutable after construction; copies share the
/// grid and basis table.
class Environment {
 public:
  Environment(const Domain& domain, BasisSet basis, Eigen::VectorXd coeffs);

  [[nodiscard]] const Domain& domain() const noexcept { return grid_->domain(); }
  [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
  [[nodiscard]] const BasisSet& basis() const noexcept { return basis_; }
  [[nodiscard]] const BasisTable& basis_table() const noexcept { return *table_; }
  [[nodiscard]] const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }

  /// phi(q_k) for every grid point.
  [[nodiscard]] std::span<const double> density() const noexcept { return density_; }
  /// Point sensor: phi at an arbitrary point of the domain.
  [[nodiscard]] double density_at(const Point& p) const;
  [[nodiscard]] double total_mass() const noexcept { return total_mass_; }

 private:
  std::shared_ptr<const Grid> grid_;
  BasisSet basis_;
  std::shared_ptr<const BasisTable> table_;
  Eigen::VectorXd coeffs_;
  std::vector<double> density_;
  double total_mass_;
};

}  // namespace coverage
