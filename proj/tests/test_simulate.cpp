#include <doctest.h>

#include <cmath>
#include <random>

#include "groundsel/graph.hpp"
#include "groundsel/simulate.hpp"
#include "support.hpp"

using namespace groundsel;

TEST_CASE("identity dynamics decay as a scalar exponential") {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3);
  x0(0) = 1.0;
  const Trajectory t = consensus_trajectory(SymMatrix::identity(3), IndexSet::none(3), x0, 1.0, 0.25);
  REQUIRE(t.times.size() == 5);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(1.0));
  CHECK(t.states(4, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(std::abs(t.states(4, 1)) < 1e-15);

  const RateCheck rc = verify_rate(t);
  CHECK(rc.holds);
  CHECK(rc.max_violation <= 1e-12);
}

TEST_CASE("ungrounded connected graph reaches consensus") {
  const SymMatrix l = laplacian(SignedGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}));
  Eigen::Vector4d x0(1, -2, 3, 0.5);
  const Trajectory t = consensus_trajectory(l, IndexSet::none(4), x0, 20.0, 0.5);
  const Eigen::VectorXd last = t.states.row(t.states.rows() - 1).transpose();
  const double avg = x0.mean();
  CHECK((last.array() - avg).abs().maxCoeff() < 1e-6);
}

TEST_CASE("grounded P3 satisfies the envelope with slack") {
  const SymMatrix l = laplacian(SignedGraph(3, {{0, 1, 1}, {1, 2, 1}}));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  const Eigen::Vector2d x0(normal(rng), normal(rng));
  const Trajectory t = consensus_trajectory(l, IndexSet({0}, 3), x0, 5.0, 0.1);
  CHECK(t.lambda_min_used == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0));
  CHECK(t.kept == std::vector<int>{1, 2});
  CHECK(verify_rate(t).holds);
}

TEST_CASE("unstable signed block grows") {
  const SymMatrix l = laplacian(SignedGraph(3, {{0, 1, -1}, {1, 2, 1}}));
  const IndexSet none = IndexSet::none(3);
  CHECK(lambda_min(l) < 0.0);
  const Trajectory t = consensus_trajectory(l, none, Eigen::Vector3d(1, 0, 0), 3.0, 0.5);
  CHECK(t.states.row(t.states.rows() - 1).norm() > 1.0);
  // The envelope is a statement about lambda_min; it still holds with growth.
  CHECK(verify_rate(t).holds);
}

TEST_CASE("verify_rate flags a doctored trajectory") {
  Trajectory t = consensus_trajectory(SymMatrix::identity(2), IndexSet::none(2), Eigen::Vector2d(1, 1), 1.0, 0.5);
  t.states(2, 0) *= 1.01;
  const RateCheck rc = verify_rate(t);
  CHECK_FALSE(rc.holds);
  CHECK(rc.max_violation > 1e-3);
}

TEST_CASE("energy is nonincreasing for PSD kept blocks") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const SignedGraph g = testsupport::random_signed_graph(7, 0.5, 0.0, rng);
    const SymMatrix l = laplacian(g);
    const IndexSet removed({trial % 7}, 7);
    Eigen::VectorXd x0(6);
    for (int i = 0; i < 6; ++i) x0(i) = normal(rng);
    const Trajectory t = consensus_trajectory(l, removed, x0, 4.0, 0.2);
    for (Eigen::Index k = 1; k < t.states.rows(); ++k)
      CHECK(t.states.row(k).squaredNorm() <= t.states.row(k - 1).squaredNorm() * (1.0 + 1e-12));
    CHECK(verify_rate(t).holds);
  }
}

TEST_CASE("consensus_trajectory validates its inputs") {
  const SymMatrix id = SymMatrix::identity(2);
  CHECK_THROWS(consensus_trajectory(id, IndexSet::none(2), Eigen::Vector2d(1, 1), 1.0, 0.0));
  CHECK_THROWS(consensus_trajectory(id, IndexSet::none(2), Eigen::Vector2d(1, 1), 0.1, 0.5));
  CHECK_THROWS(consensus_trajectory(id, IndexSet({0}, 2), Eigen::Vector2d(1, 1), 1.0, 0.5));
}
