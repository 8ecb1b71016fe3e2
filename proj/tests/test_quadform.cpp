#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "groundsel/quadform.hpp"
#include "support.hpp"

using namespace groundsel;

namespace {

QuadBudget imhof_budget(const SymMatrix& a, double eps) {
  QuadBudget b = default_budget(a, eps);
  b.engine = QEngine::imhof;
  return b;
}

// Outer midpoint sum of imhof_survival, the unfused form of the Imhof engine.
double nested_reference(const ChiSquareMix& zhat, double R, long N, double K) {
  const double h = R / static_cast<double>(N);
  double s = 0.0;
  for (long i = 0; i < N; ++i) s += imhof_survival(zhat, (static_cast<double>(i) + 0.5) * h, K, 256, 1e-10);
  return -s * h;
}

}  // namespace

TEST_CASE("ChiSquareMix validation") {
  CHECK_THROWS(ChiSquareMix({}));
  CHECK_THROWS(ChiSquareMix({1.0, std::nan("")}));
  CHECK(ChiSquareMix({2.0, -1.0}).mean() == 1.0);
}

TEST_CASE("imhof_survival examples") {
  const double want = 2.0 * (1.0 - testsupport::normal_cdf(1.0));
  CHECK(std::abs(imhof_survival(ChiSquareMix({1.0}), 1.0, 200.0) - want) < 1e-3);
  CHECK(std::abs(imhof_survival(ChiSquareMix({1.0}), 0.0, 200.0) - 1.0) < 1e-3);
  CHECK(std::abs(imhof_survival(ChiSquareMix({1.0, -1.0}), 0.0, 200.0) - 0.5) < 1e-3);

  CHECK_THROWS_WITH(imhof_survival(ChiSquareMix({0.0, 0.0}), 1.0, 10.0), doctest::Contains("degenerate"));
  CHECK_THROWS(imhof_survival(ChiSquareMix({1.0}), 1.0, 0.0));
  CHECK_THROWS(imhof_survival(ChiSquareMix({1.0}), 1.0, 10.0, 4));
}

TEST_CASE("imhof_survival against chi-squared(1) closed form across thresholds") {
  // Pr(chi2_1 > w) = 2 (1 - Phi(sqrt w)).
  for (double w : {0.05, 0.5, 2.0, 4.0, 9.0}) {
    const double want = 2.0 * (1.0 - testsupport::normal_cdf(std::sqrt(w)));
    CHECK(std::abs(imhof_survival(ChiSquareMix({1.0}), w, 1e4) - want) < 1e-4);
  }
}

TEST_CASE("imhof_survival agrees with Monte Carlo on random mixes") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(3);
    for (double& x : a) x = coef(rng);
    const ChiSquareMix mix(a);
    const std::vector<double> ws{-2.0, 0.0, 1.0, 3.0};
    const auto mc = survival_mc(mix, ws, 200000, 1000 + trial);
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const double p = imhof_survival(mix, ws[k], imhof_truncation_point(mix, 1e-5));
      CHECK(std::abs(p - mc[k].estimate) <= 3.0 * mc[k].std_error + 1e-3);
    }
  }
}

TEST_CASE("tail_bound_chernoff") {
  CHECK(tail_bound_chernoff(ChiSquareMix({1.0}), 0.0) == doctest::Approx(std::sqrt(2.0)));
  const double b40 = tail_bound_chernoff(ChiSquareMix({1.0}), 40.0);
  CHECK(b40 == doctest::Approx(std::sqrt(2.0) * std::exp(-10.0)));
  CHECK(survival_mc(ChiSquareMix({1.0}), {40.0}, 10000000, 5)[0].estimate <= b40);

  const ChiSquareMix mix({2.0, 1.0});
  for (double z : {1.0, 5.0, 10.0}) CHECK(tail_bound_chernoff(mix, z) >= imhof_survival(mix, z, 1e3));

  CHECK_THROWS(tail_bound_chernoff(ChiSquareMix({-1.0, -2.0}), 1.0));
  CHECK_THROWS(tail_bound_chernoff(ChiSquareMix({1.0}), -1.0));
}

TEST_CASE("default_budget schedule") {
  const QuadBudget b = default_budget(SymMatrix::identity(4), 1e-2);
  CHECK(b.R == doctest::Approx(4.0 * (std::log(100.0) + 4.0)));
  CHECK(b.R == doctest::Approx(34.42).epsilon(1e-3));
  CHECK(b.K == doctest::Approx(50.0));
  CHECK(b.N == static_cast<long>(std::ceil(b.R / 1e-2)));

  const QuadBudget tight = default_budget(SymMatrix::identity(4), 1e-3);
  CHECK(tight.R > b.R);
  CHECK(tight.N > b.N);
  CHECK(default_budget(SymMatrix::identity(4), 1e-9).N == kBudgetNMax);
  CHECK_THROWS(default_budget(SymMatrix::identity(2), 0.0));
}

TEST_CASE("q_value closed-form cases") {
  for (QEngine engine : {QEngine::contour, QEngine::imhof}) {
    QuadBudget b = default_budget(SymMatrix::identity(3), 1e-3);
    b.engine = engine;
    CHECK(q_value(SymMatrix::identity(3), IndexSet::none(3), 5.0, b) == 0.0);
    CHECK(q_value(SymMatrix::identity(3), IndexSet::all(3), 0.0, b) == 0.0);
    Eigen::MatrixXd neg(1, 1);
    neg << -1.0;
    CHECK(q_value(SymMatrix(neg), IndexSet::none(1), 1.0, b) == doctest::Approx(-1.0));
  }
}

TEST_CASE("q_value on diag(1, -1) equals -2/pi") {
  // w1^2 - w2^2 = 2 U V with U, V iid standard normal, so E[min(., 0)] = -E|U V| = -2/pi.
  const SymMatrix a = SymMatrix::diagonal(Eigen::Vector2d(1.0, -1.0));
  const double want = -2.0 / std::numbers::pi;
  CHECK(std::abs(q_value(a, IndexSet::none(2), 1.0, default_budget(a, 1e-6)) - want) < 1e-10);
  CHECK(std::abs(q_value(a, IndexSet::none(2), 1.0, imhof_budget(a, 1e-3)) - want) < 1e-3);

  const McEstimate mc = q_value_mc(a, IndexSet::none(2), 1.0, 1000000, 3);
  CHECK(std::abs(mc.estimate - want) < 3.0 * (mc.std_error + 1e-6));
}

TEST_CASE("q_value_mc examples") {
  const McEstimate id = q_value_mc(SymMatrix::identity(2), IndexSet::none(2), 1.0, 1000, 1);
  CHECK(id.estimate == 0.0);
  CHECK(id.std_error == 0.0);

  Eigen::MatrixXd neg(1, 1);
  neg << -1.0;
  const McEstimate m = q_value_mc(SymMatrix(neg), IndexSet::none(1), 1.0, 100000, 2);
  CHECK(std::abs(m.estimate + 1.0) < 3.0 * m.std_error);

  const McEstimate a = q_value_mc(SymMatrix(neg), IndexSet::none(1), 1.0, 5000, 9);
  const McEstimate b = q_value_mc(SymMatrix(neg), IndexSet::none(1), 1.0, 5000, 9);
  CHECK(a.estimate == b.estimate);
  CHECK_THROWS(q_value_mc(SymMatrix(neg), IndexSet::none(1), 1.0, 999, 1));
}

TEST_CASE("both engines match Monte Carlo on random indefinite 6x6 forms") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a(testsupport::random_symmetric(6, rng));
    const IndexSet s = testsupport::random_subset(6, rng, 0.3);
    const double alpha = 1.5;
    const double qc = q_value(a, s, alpha, default_budget(a, 1e-3));
    const double qi = q_value(a, s, alpha, imhof_budget(add_alpha_diag(a, s, alpha), 1e-3));
    const McEstimate mc = q_value_mc(a, s, alpha, 200000, 500 + trial);
    CHECK(std::abs(qc - mc.estimate) <= 3.0 * (mc.std_error + 1e-3));
    CHECK(std::abs(qi - qc) <= 3e-3);
  }
}

TEST_CASE("contour engine keeps relative accuracy where Q is tiny") {
  // One negative direction against nine stiff ones; |Q| is around 5e-7 and
  // a 1e-6 relative change in a coefficient must register.
  std::vector<double> a(9, 20.0);
  a.push_back(-1.0);
  const double q = negative_part_contour(ChiSquareMix(a));
  CHECK(q < 0.0);
  CHECK(q > -1e-5);
  a.back() = -1.000001;
  const double q2 = negative_part_contour(ChiSquareMix(a));
  CHECK(q2 < q);
  // Scaling every coefficient by c scales E[min(W, 0)] by c.
  std::vector<double> scaled = a;
  for (double& x : scaled) x *= 3.0;
  CHECK(negative_part_contour(ChiSquareMix(scaled)) == doctest::Approx(3.0 * q2).epsilon(1e-8));
}

TEST_CASE("fused Imhof sum equals the nested midpoint reference") {
  // Small N so the nested reference stays cheap.
  QuadBudget b;
  b.eps = 1e-4;
  b.R = 12.0;
  b.N = 60;
  b.K = 400.0;
  b.engine = QEngine::imhof;
  for (const auto& zhat : {ChiSquareMix({1.0, -0.5}), ChiSquareMix({0.8, 0.3, -2.0}), ChiSquareMix({1.0})}) {
    const double fused = negative_part_expectation(zhat, b);
    const double nested = nested_reference(zhat, b.R, b.N, b.K);
    CHECK(std::abs(fused - nested) < 2e-4);
  }
}

TEST_CASE("certificate equivalence: Q vanishes exactly when the shifted matrix is PSD") {
  std::mt19937_64 rng(77);
  const double eps_q = kDefaultEpsQ;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + trial % 4;
    const SymMatrix a(testsupport::random_symmetric(n, rng));
    const IndexSet s = testsupport::random_subset(n, rng);
    const double alpha = 2.0;
    const SymMatrix m = add_alpha_diag(a, s, alpha);
    const bool psd = lambda_min(m) >= -pd_tolerance(m);
    const double q = q_value(a, s, alpha, default_budget(m, 1e-3));
    CHECK((q >= -eps_q) == psd);
  }
}

TEST_CASE("Q is monotone and submodular in the grounded set") {
  std::mt19937_64 rng(123);
  const double eps = 1e-3;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6;
    const SymMatrix a(testsupport::random_symmetric(n, rng));
    const double alpha = 3.0;
    IndexSet s = testsupport::random_subset(n, rng, 0.3);
    IndexSet t = s;
    for (int v = 0; v < n; ++v)
      if (!t.contains(v) && rng() % 2) t = t.with(v);
    int v = -1;
    for (int i = 0; i < n; ++i)
      if (!t.contains(i)) v = i;
    const QuadBudget b = default_budget(a, eps);
    const double qs = q_value(a, s, alpha, b);
    const double qt = q_value(a, t, alpha, b);
    CHECK(qs <= qt + 2.0 * eps);
    if (v < 0) continue;
    const double gain_s = q_value(a, s.with(v), alpha, b) - qs;
    const double gain_t = q_value(a, t.with(v), alpha, b) - qt;
    CHECK(gain_s >= gain_t - 4.0 * eps);
  }
}
