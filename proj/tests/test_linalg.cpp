#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "groundsel/linalg.hpp"
#include "support.hpp"

using namespace groundsel;

namespace {

SymMatrix p3_laplacian() {
  Eigen::Matrix3d l;
  l << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  return SymMatrix(l);
}

}  // namespace

TEST_CASE("IndexSet keeps members sorted and rejects bad input") {
  const IndexSet s({3, 0, 2}, 5);
  CHECK(s.members() == std::vector<int>{0, 2, 3});
  CHECK(s.complement().members() == std::vector<int>{1, 4});
  CHECK(s.with(1).size() == 4);
  CHECK(s.without(2).members() == std::vector<int>{0, 3});
  CHECK_THROWS_AS(IndexSet({1, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet({3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet({-1}, 3), std::invalid_argument);
}

TEST_CASE("SymMatrix symmetrises on construction") {
  Eigen::Matrix2d m;
  m << 1, 2, 0, 1;
  const SymMatrix s(m);
  CHECK(s(0, 1) == doctest::Approx(1.0));
  CHECK(s(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("submatrix") {
  CHECK(submatrix(SymMatrix::identity(3), IndexSet({0, 2}, 3)).dense().isApprox(Eigen::MatrixXd::Identity(2, 2)));

  const SymMatrix g = submatrix(p3_laplacian(), IndexSet({1, 2}, 3));
  Eigen::Matrix2d want;
  want << 2, -1, -1, 1;
  CHECK(g.dense().isApprox(want));
  CHECK(lambda_min(g) == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  const SymMatrix a(testsupport::random_symmetric(5, rng));
  CHECK(submatrix(a, IndexSet::all(5)).dense() == a.dense());

  CHECK_THROWS_WITH(submatrix(a, IndexSet::none(5)), doctest::Contains("empty submatrix"));
}

TEST_CASE("eig_sym examples") {
  const Spectrum id = eig_sym(SymMatrix::identity(4));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  const Spectrum d = eig_sym(SymMatrix::diagonal(Eigen::Vector2d(3, -1)));
  CHECK(d.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(-1.0));

  // Characteristic polynomial of the P3 Laplacian: -x (x - 1)(x - 3).
  const Spectrum p3 = eig_sym(p3_laplacian());
  CHECK(std::abs(p3.eigenvalues(0) - 3.0) < 1e-10);
  CHECK(std::abs(p3.eigenvalues(1) - 1.0) < 1e-10);
  CHECK(std::abs(p3.eigenvalues(2)) < 1e-10);

  Eigen::Matrix2d bad = Eigen::Matrix2d::Identity();
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(eig_sym(SymMatrix(bad)));
}

TEST_CASE("lambda_min examples") {
  CHECK(lambda_min(SymMatrix::identity(3)) == doctest::Approx(1.0));
  Eigen::Matrix2d neg;
  neg << -1, 1, 1, -1;
  CHECK(lambda_min(SymMatrix(neg)) == doctest::Approx(-2.0));
}

TEST_CASE("eig_sym reconstruction and orthonormality") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a(testsupport::random_symmetric(2 + trial % 9, rng, 3.0));
    const Spectrum s = eig_sym(a);
    const auto n = a.n();
    CHECK((s.basis.transpose() * s.basis - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd rebuilt = s.basis * s.eigenvalues.asDiagonal() * s.basis.transpose();
    CHECK((rebuilt - a.dense()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + a.max_abs()));
    for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
  }
}

TEST_CASE("Cauchy interlacing on single deletions") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix a(testsupport::random_symmetric(8, rng));
    const Eigen::VectorXd lam = eig_sym(a).eigenvalues;
    for (int drop = 0; drop < 8; ++drop) {
      const Eigen::VectorXd mu = eig_sym(submatrix(a, IndexSet::all(8).without(drop))).eigenvalues;
      for (int k = 0; k < 7; ++k) {
        CHECK(lam(k) >= mu(k) - 1e-10);
        CHECK(mu(k) >= lam(k + 1) - 1e-10);
      }
    }
  }
}

TEST_CASE("lambda_min is monotone in the kept set") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const SymMatrix a(testsupport::random_symmetric(7, rng));
    IndexSet small = testsupport::random_subset(7, rng, 0.4);
    if (small.empty()) small = small.with(0);
    IndexSet big = small;
    for (int v = 0; v < 7; ++v)
      if (!big.contains(v) && rng() % 2) big = big.with(v);
    // A bigger kept set can only lower the smallest eigenvalue.
    CHECK(lambda_min(submatrix(a, big)) <= lambda_min(submatrix(a, small)) + 1e-10);
  }
}

TEST_CASE("add_alpha_diag") {
  std::mt19937_64 rng(1);
  const SymMatrix a(testsupport::random_symmetric(4, rng));
  CHECK(add_alpha_diag(a, IndexSet::none(4), 7.0).dense() == a.dense());

  const SymMatrix z = add_alpha_diag(SymMatrix::zeros(2), IndexSet({0}, 2), 5.0);
  CHECK(z(0, 0) == 5.0);
  CHECK(z(1, 1) == 0.0);
  CHECK(z(0, 1) == 0.0);

  Eigen::Matrix2d neg;
  neg << -1, 1, 1, -1;
  const SymMatrix m = add_alpha_diag(SymMatrix(neg), IndexSet({0, 1}, 2), 3.0);
  Eigen::Matrix2d want;
  want << 2, 1, 1, 2;
  CHECK(m.dense().isApprox(want));
  CHECK(lambda_min(m) == doctest::Approx(1.0));
}

TEST_CASE("inv_trace") {
  CHECK(inv_trace(SymMatrix::identity(3)) == doctest::Approx(3.0));
  CHECK(inv_trace(SymMatrix::diagonal(Eigen::Vector2d(2, 4))) == doctest::Approx(0.75));
  // Explicit inverse of [[2,-1],[-1,1]] is [[1,1],[1,2]].
  CHECK(inv_trace(submatrix(p3_laplacian(), IndexSet({1, 2}, 3))) == doctest::Approx(3.0).epsilon(1e-12));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd pd = testsupport::random_pd(6, rng, 1.0);
    CHECK(std::abs(inv_trace(SymMatrix(pd)) - pd.inverse().trace()) < 1e-8);
  }

  CHECK_THROWS_WITH_AS(inv_trace(p3_laplacian()), doctest::Contains("inverse trace undefined"), std::domain_error);
}

TEST_CASE("log_det") {
  CHECK(log_det(SymMatrix::identity(5)) == doctest::Approx(0.0));
  const double e = std::exp(1.0);
  CHECK(log_det(SymMatrix::diagonal(Eigen::Vector2d(e, e))) == doctest::Approx(2.0));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd pd = testsupport::random_pd(4, rng, 0.5);
    CHECK(std::abs(log_det(SymMatrix(pd)) - std::log(testsupport::det_by_pivots(pd))) < 1e-8);
  }
  CHECK_THROWS_AS(log_det(p3_laplacian()), std::domain_error);
}

TEST_CASE("symmetrize_lyapunov") {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd s = testsupport::random_symmetric(4, rng);
  CHECK(symmetrize_lyapunov(s, Eigen::VectorXd::Ones(4)).dense().isApprox(2.0 * s));

  Eigen::Matrix2d a;
  a << 1, 2, 0, 1;
  Eigen::Matrix2d want;
  want << 2, 2, 2, 2;
  CHECK(symmetrize_lyapunov(a, Eigen::Vector2d(1, 1)).dense().isApprox(want));

  CHECK_THROWS_AS(symmetrize_lyapunov(a, Eigen::Vector2d(1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(symmetrize_lyapunov(a, Eigen::Vector2d(-1, 2)), std::invalid_argument);
}

TEST_CASE("symmetrize_lyapunov commutes with restriction to every 3-subset") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  Eigen::MatrixXd a(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = normal(rng);
  Eigen::VectorXd d(5);
  for (int i = 0; i < 5; ++i) d(i) = pos(rng);
  const SymMatrix b = symmetrize_lyapunov(a, d);

  int subsets = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k) {
        const IndexSet s({i, j, k}, 5);
        const Eigen::Vector3d ds(d(i), d(j), d(k));
        const SymMatrix restricted = symmetrize_lyapunov(submatrix(a, s), ds);
        CHECK((submatrix(b, s).dense() - restricted.dense()).cwiseAbs().maxCoeff() == 0.0);
        ++subsets;
      }
  CHECK(subsets == 10);
}
