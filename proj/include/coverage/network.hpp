#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace coverage {

/// Communication weights l_ij >= 0 with zero diagonal, and the weighted
/// Laplacian L_ii = sum_j l_ij, L_ij = -l_ij.
class NetworkGraph {
 public:
  explicit NetworkGraph(Eigen::MatrixXd weights);

  static NetworkGraph complete(std::size_t n, double weight = 1.0);
  /// i - i+1 chain.
  static NetworkGraph path(std::size_t n, double weight = 1.0);

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(weights_.rows());
  }
  [[nodiscard]] double weight(std::size_t i, std::size_t j) const {
    return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  [[nodiscard]] const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  [[nodiscard]] const Eigen::MatrixXd& laplacian() const noexcept { return laplacian_; }

  /// Every agent reachable from agent 0 along edges with positive weight in
  /// either direction.
  [[nodiscard]] bool connected() const;
  /// Largest Laplacian eigenvalue magnitude (spectral norm for symmetric L).
  [[nodiscard]] double laplacian_norm() const;

 private:
  Eigen::MatrixXd weights_;
  Eigen::MatrixXd laplacian_;
};

}  // namespace coverage
