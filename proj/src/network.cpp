#include "coverage/network.hpp"

#include <queue>

#include "coverage/types.hpp"

namespace coverage {

NetworkGraph::NetworkGraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols() || weights_.rows() == 0) {
    throw ValidationError("network: weight matrix must be square and non-empty");
  }
  if ((weights_.array() < 0.0).any()) {
    throw ValidationError("network: weights must be non-negative");
  }
  if (weights_.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw ValidationError("network: self edges are not permitted");
  }
  laplacian_ = -weights_;
  laplacian_.diagonal() = weights_.rowwise().sum();
}

NetworkGraph NetworkGraph::complete(std::size_t n, double weight) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(m, m, weight);
  w.diagonal().setZero();
  return NetworkGraph(std::move(w));
}

NetworkGraph NetworkGraph::path(std::size_t n, double weight) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) w(i, i + 1) = w(i + 1, i) = weight;
  return NetworkGraph(std::move(w));
}

bool NetworkGraph::connected() const {
  const auto n = weights_.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  seen[0] = true;
  Eigen::Index count = 1;
  while (!frontier.empty()) {
    const auto i = frontier.front();
    frontier.pop();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && (weights_(i, j) > 0.0 || weights_(j, i) > 0.0)) {
        seen[static_cast<std::size_t>(j)] = true;
        ++count;
        frontier.push(j);
      }
    }
  }
  return count == n;
}

double NetworkGraph::laplacian_norm() const {
  const Eigen::MatrixXd sym = 0.5 * (laplacian_ + laplacian_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace coverage
