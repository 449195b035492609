#include "coverage/adaptive_estimator.hpp"

#include "coverage/global_controller.hpp"

namespace coverage {

void EstimatorGains::validate(std::size_t basis_size) const {
  if (!(gamma >= 0.0)) throw ValidationError("estimator: gamma must be non-negative");
  if (!(zeta >= 0.0)) throw ValidationError("estimator: zeta must be non-negative");
  if (Gamma_diag.size() != 0) {
    if (static_cast<std::size_t>(Gamma_diag.size()) != basis_size) {
      throw ValidationError("estimator: Gamma_diag length does not match basis");
    }
    if ((Gamma_diag.array() <= 0.0).any()) {
      throw ValidationError("estimator: Gamma_diag entries must be positive");
    }
  }
}

EstimatorState EstimatorState::initial(Eigen::VectorXd a_hat0) {
  const Eigen::Index m = a_hat0.size();
  return {std::move(a_hat0), Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m)};
}

void accumulate_data(EstimatorState& state, const Eigen::VectorXd& basis_at_p,
                     double measured_phi, double w_t, double dt) {
  if (measured_phi < 0.0) {
    throw ValidationError("accumulate_data: measured density must be non-negative");
  }
  if (basis_at_p.size() != state.a_hat.size()) {
    throw ValidationError("accumulate_data: basis vector length does not match estimate");
  }
  if (w_t == 0.0) return;
  const double s = w_t * dt;
  state.Upsilon.noalias() += (s * measured_phi) * basis_at_p;
  state.Lambda.noalias() += s * basis_at_p * basis_at_p.transpose();
}

void accumulate_data(EstimatorState& state, const BasisSet& basis, const Domain& domain,
                     const Point& position, double measured_phi, double w_t, double dt) {
  accumulate_data(state, eval_basis(basis, domain, position), measured_phi, w_t, dt);
}

Eigen::VectorXd pre_adaptation(const EstimatorState& state, const Eigen::MatrixXd& F,
                               std::span<const Eigen::VectorXd> neighbor_a_hats,
                               std::span<const double> l_weights,
                               const EstimatorGains& gains) {
  const Eigen::Index m = state.a_hat.size();
  if (F.rows() != m || F.cols() != m) {
    throw ValidationError("pre_adaptation: F must be m x m");
  }
  if (neighbor_a_hats.size() != l_weights.size()) {
    throw ValidationError("pre_adaptation: one weight per neighbour estimate required");
  }
  Eigen::VectorXd consensus = Eigen::VectorXd::Zero(m);
  for (std::size_t j = 0; j < neighbor_a_hats.size(); ++j) {
    if (neighbor_a_hats[j].size() != m) {
      throw ValidationError("pre_adaptation: neighbour estimate has wrong length");
    }
    if (l_weights[j] < 0.0) throw ValidationError("pre_adaptation: weights must be >= 0");
    if (l_weights[j] != 0.0) consensus += l_weights[j] * (state.a_hat - neighbor_a_hats[j]);
  }
  return -F * state.a_hat - gains.gamma * (state.Lambda * state.a_hat - state.Upsilon) -
         gains.zeta * consensus;
}

Eigen::MatrixXd basis_moment(std::span<const Point> positions, const Grid& grid,
                             const BasisTable& table, const WeightTable& weights,
                             std::size_t i) {
  if (table.grid_size() != grid.size() || weights.grid_size() != grid.size()) {
    throw ValidationError("basis_moment: table size does not match grid");
  }
  const auto m = static_cast<Eigen::Index>(table.basis_size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, m);
  const Point& p = positions[i];
  const auto w = weights.column(i);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (w[k] == 0.0) continue;
    const Point d = w[k] * (grid.point(k) - p);
    for (const auto& e : table.at(k)) B.col(e.index) += e.value * d;
  }
  return B * grid.cell_area();
}

Eigen::MatrixXd compute_F(std::span<const Point> positions, const Grid& grid,
                          const BasisTable& table, const WeightTable& weights, std::size_t i,
                          double epsilon) {
  const Eigen::MatrixXd B = basis_moment(positions, grid, table, weights, i);
  return epsilon * (B.transpose() * B);
}

Eigen::MatrixXd compute_F(std::span<const Point> positions, double lambda, std::size_t i,
                          const BasisTable& table, const Grid& grid, double epsilon) {
  const auto weights = WeightTable::annealed(compute_ranks(positions, grid), lambda);
  return compute_F(positions, grid, table, weights, i, epsilon);
}

void project_and_step(EstimatorState& state, const Eigen::VectorXd& pre_rate,
                      const EstimatorGains& gains, double dt) {
  if (pre_rate.size() != state.a_hat.size()) {
    throw ValidationError("project_and_step: rate length does not match estimate");
  }
  for (Eigen::Index j = 0; j < state.a_hat.size(); ++j) {
    double& a = state.a_hat[j];
    const bool free = a > gains.a_min || (a == gains.a_min && pre_rate[j] >= 0.0);
    if (free) a += gains.gain(j) * pre_rate[j] * dt;
    if (a < gains.a_min) a = gains.a_min;
  }
}

Point estimated_control(std::span<const Point> positions, const Grid& grid,
                        const BasisTable& table, const Eigen::VectorXd& a_hat_i,
                        const WeightTable& weights, std::size_t i, double epsilon) {
  const auto phi_hat = table.combine(a_hat_i);
  return epsilon * weighted_moment(positions, grid, phi_hat, weights, i);
}

Point estimated_control(std::span<const Point> positions, const Grid& grid,
                        const BasisTable& table, const Eigen::VectorXd& a_hat_i, double lambda,
                        std::size_t i, double epsilon) {
  const auto weights = WeightTable::annealed(compute_ranks(positions, grid), lambda);
  return estimated_control(positions, grid, table, a_hat_i, weights, i, epsilon);
}

}  // namespace coverage
