#include <Eigen/Eigenvalues>

#include "coverage/network.hpp"
#include "coverage/types.hpp"
#include "doctest.h"

using namespace coverage;

TEST_CASE("laplacian of a complete graph") {
  const auto g = NetworkGraph::complete(4, 2.0);
  const auto& L = g.laplacian();
  CHECK((L * Eigen::VectorXd::Ones(4)).isZero(1e-14));
  CHECK(L.isApprox(L.transpose()));
  CHECK(L(0, 0) == doctest::Approx(6.0));
  CHECK(L(1, 2) == doctest::Approx(-2.0));
  CHECK(g.laplacian_norm() == doctest::Approx(8.0));  // n w
  CHECK(g.connected());
}

TEST_CASE("path graph spectrum and connectivity") {
  const auto g = NetworkGraph::path(5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.laplacian());
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] > 1e-6);
  CHECK(g.connected());
  CHECK(g.laplacian_norm() <= 4.0);
}

TEST_CASE("disconnected and invalid graphs") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
  w(0, 1) = w(1, 0) = 1.0;
  w(2, 3) = w(3, 2) = 1.0;
  CHECK_FALSE(NetworkGraph(w).connected());

  Eigen::MatrixXd neg = Eigen::MatrixXd::Zero(2, 2);
  neg(0, 1) = -1.0;
  CHECK_THROWS_AS(NetworkGraph{neg}, ValidationError);
  Eigen::MatrixXd self = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(NetworkGraph{self}, ValidationError);
  CHECK_THROWS_AS(NetworkGraph{Eigen::MatrixXd::Zero(2, 3)}, ValidationError);

  // one-directional edge still counts for reachability
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(2, 2);
  one(1, 0) = 1.0;
  CHECK(NetworkGraph(one).connected());
}
