// Per-agent online estimation of the density coefficients for an unknown
// environment.
//
// Each agent i holds a_hat_i and integrates
//   pre_i   = -F_i a_hat_i - gamma (Lambda_i a_hat_i - Upsilon_i)
//             - zeta sum_j l_ij (a_hat_i - a_hat_j)
//   a_hat_i' = Gamma (pre_i - I_proj pre_i)
// where I_proj blocks components that sit on the lower bound a_min and
// would move below it.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coverage/environment.hpp"
#include "coverage/ranking.hpp"
#include "coverage/types.hpp"

namespace coverage {

struct EstimatorGains {
  double gamma = 0.14;
  double zeta = 0.01;
  Eigen::VectorXd Gamma_diag;  // empty means identity
  double a_min = 0.0;

  void validate(std::size_t basis_size) const;
  [[nodiscard]] double gain(Eigen::Index j) const {
    return Gamma_diag.size() == 0 ? 1.0 : Gamma_diag[j];
  }
};

struct EstimatorState {
  Eigen::VectorXd a_hat;
  Eigen::MatrixXd Lambda;   // sum of w K(p) K(p)^T dt
  Eigen::VectorXd Upsilon;  // sum of w K(p) phi(p) dt

  static EstimatorState initial(Eigen::VectorXd a_hat0);
};

/// w(t) = r on [0, tau_w), 0 afterwards.
struct DataWeight {
  double r = 180.0;
  double tau_w = 6.0;

  [[nodiscard]] double at(double t) const noexcept { return t < tau_w ? r : 0.0; }
};

/// Adds one Euler slice of the data integrals, given the basis vector at the
/// agent position and the sensor reading there.
void accumulate_data(EstimatorState& state, const Eigen::VectorXd& basis_at_p,
                     double measured_phi, double w_t, double dt);
void accumulate_data(EstimatorState& state, const BasisSet& basis, const Domain& domain,
                     const Point& position, double measured_phi, double w_t, double dt);

/// Unprojected estimate rate; neighbour snapshots are from the previous round.
[[nodiscard]] Eigen::VectorXd pre_adaptation(const EstimatorState& state,
                                             const Eigen::MatrixXd& F,
                                             std::span<const Eigen::VectorXd> neighbor_a_hats,
                                             std::span<const double> l_weights,
                                             const EstimatorGains& gains);

/// 2 x m moment B_i = sum_k w(k,i) (q_k - p_i) K(q_k)^T dq; note B_i a = W_i.
[[nodiscard]] Eigen::MatrixXd basis_moment(std::span<const Point> positions, const Grid& grid,
                                           const BasisTable& table, const WeightTable& weights,
                                           std::size_t i);

/// F_i = epsilon B_i^T B_i (m x m, rank <= 2, positive semidefinite).
[[nodiscard]] Eigen::MatrixXd compute_F(std::span<const Point> positions, const Grid& grid,
                                        const BasisTable& table, const WeightTable& weights,
                                        std::size_t i, double epsilon);
[[nodiscard]] Eigen::MatrixXd compute_F(std::span<const Point> positions, double lambda,
                                        std::size_t i, const BasisTable& table,
                                        const Grid& grid, double epsilon);

/// Projected Euler step of a_hat. Components leaving the bound are snapped
/// back to a_min, which the continuous law never needs.
void project_and_step(EstimatorState& state, const Eigen::VectorXd& pre_rate,
                      const EstimatorGains& gains, double dt);

/// u_i = epsilon * sum_k w(k,i) (q_k - p_i) phi_hat_i(q_k) dq.
[[nodiscard]] Point estimated_control(std::span<const Point> positions, const Grid& grid,
                                      const BasisTable& table, const Eigen::VectorXd& a_hat_i,
                                      const WeightTable& weights, std::size_t i,
                                      double epsilon);
[[nodiscard]] Point estimated_control(std::span<const Point> positions, const Grid& grid,
                                      const BasisTable& table, const Eigen::VectorXd& a_hat_i,
                                      double lambda, std::size_t i, double epsilon);

}  // namespace coverage
