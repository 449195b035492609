#include "coverage/environment.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace coverage {

void Domain::validate() const {
  if (!(upper.x() > lower.x() && upper.y() > lower.y())) {
    throw ValidationError("domain: upper bound must exceed lower bound on both axes");
  }
  if (grid_resolution < 1) {
    throw ValidationError("domain: grid_resolution must be a positive integer");
  }
}

bool Domain::contains(const Point& p) const noexcept {
  return p.x() >= lower.x() && p.x() <= upper.x() && p.y() >= lower.y() &&
         p.y() <= upper.y();
}

Point Domain::clamp(const Point& p) const noexcept {
  return p.cwiseMax(lower).cwiseMin(upper);
}

Grid::Grid(const Domain& domain) : domain_(domain) {
  domain_.validate();
  const int res = domain_.grid_resolution;
  spacing_ = (domain_.upper - domain_.lower) / static_cast<double>(res);
  cell_area_ = spacing_.x() * spacing_.y();
  points_.reserve(static_cast<std::size_t>(res) * res);
  for (int iy = 0; iy < res; ++iy) {
    for (int ix = 0; ix < res; ++ix) {
      points_.emplace_back(domain_.lower.x() + (ix + 0.5) * spacing_.x(),
                           domain_.lower.y() + (iy + 0.5) * spacing_.y());
    }
  }
}

double integrate(const Grid& grid, std::span<const double> field) {
  if (field.size() != grid.size()) {
    throw ValidationError("integrate: field size does not match grid");
  }
  double sum = 0.0;
  for (double v : field) sum += v;
  return sum * grid.cell_area();
}

namespace {

double gaussian(double dist_sq, double sigma) {
  return std::exp(-dist_sq / (2.0 * sigma * sigma)) /
         (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

BasisSet::BasisSet(std::vector<Point> means, double sigma, double rho_trunc)
    : means_(std::move(means)), sigma_(sigma), rho_trunc_(rho_trunc) {
  if (means_.empty()) throw ValidationError("basis: at least one mean required");
  if (!(sigma_ > 0.0)) throw ValidationError("basis: sigma must be positive");
  if (!(rho_trunc_ > 0.0)) throw ValidationError("basis: rho_trunc must be positive");
  g_trunc_ = gaussian(rho_trunc_ * rho_trunc_, sigma_);
}

BasisSet BasisSet::grid_layout(const Domain& domain, int cells_x, int cells_y,
                               double sigma, double rho_trunc) {
  if (cells_x < 1 || cells_y < 1) {
    throw ValidationError("basis: layout needs at least one cell per axis");
  }
  const Point cell{(domain.upper.x() - domain.lower.x()) / cells_x,
                   (domain.upper.y() - domain.lower.y()) / cells_y};
  std::vector<Point> means;
  means.reserve(static_cast<std::size_t>(cells_x) * cells_y);
  for (int v = 0; v < cells_y; ++v) {
    for (int u = 0; u < cells_x; ++u) {
      means.emplace_back(domain.lower.x() + (u + 0.5) * cell.x(),
                         domain.lower.y() + (v + 0.5) * cell.y());
    }
  }
  return BasisSet(std::move(means), sigma, rho_trunc);
}

double BasisSet::peak() const noexcept { return gaussian(0.0, sigma_) - g_trunc_; }

double BasisSet::component(std::size_t j, const Point& q) const noexcept {
  const double d2 = (q - means_[j]).squaredNorm();
  if (d2 >= rho_trunc_ * rho_trunc_) return 0.0;
  return gaussian(d2, sigma_) - g_trunc_;
}

Eigen::VectorXd eval_basis(const BasisSet& basis, const Domain& domain, const Point& point) {
  if (!domain.contains(point)) {
    std::ostringstream msg;
    msg << "eval_basis: point (" << point.x() << ", " << point.y() << ") outside domain";
    throw std::domain_error(msg.str());
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = basis.component(j, point);
  }
  return out;
}

double eval_density(const BasisSet& basis, const Domain& domain, const Point& point,
                    const Eigen::VectorXd& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) {
    throw ValidationError("eval_density: coefficient count does not match basis");
  }
  if ((coeffs.array() < 0.0).any()) {
    throw ValidationError("eval_density: coefficients must be non-negative");
  }
  return eval_basis(basis, domain, point).dot(coeffs);
}

BasisTable::BasisTable(const Grid& grid, const BasisSet& basis) : basis_size_(basis.size()) {
  offsets_.reserve(grid.size() + 1);
  offsets_.push_back(0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double v = basis.component(j, grid.point(k));
      if (v > 0.0) entries_.push_back({static_cast<int>(j), v});
    }
    offsets_.push_back(entries_.size());
  }
}

std::vector<double> BasisTable::combine(const Eigen::VectorXd& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != basis_size_) {
    throw ValidationError("basis table: coefficient count does not match basis");
  }
  std::vector<double> out(grid_size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (const Entry& e : at(k)) s += e.value * coeffs[e.index];
    out[k] = s;
  }
  return out;
}

Environment::Environment(const Domain& domain, BasisSet basis, Eigen::VectorXd coeffs)
    : grid_(std::make_shared<const Grid>(domain)),
      basis_(std::move(basis)),
      table_(std::make_shared<const BasisTable>(*grid_, basis_)),
      coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != basis_.size()) {
    throw ValidationError("environment: coefficient count does not match basis");
  }
  if ((coeffs_.array() < 0.0).any()) {
    throw ValidationError("environment: coefficients must be non-negative");
  }
  density_ = table_->combine(coeffs_);
  total_mass_ = integrate(*grid_, density_);
}

double Environment::density_at(const Point& p) const {
  return eval_density(basis_, domain(), p, coeffs_);
}

}  // namespace coverage
