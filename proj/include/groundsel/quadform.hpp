#pragma once

// Distribution of indefinite Gaussian quadratic forms.
//
// A quadratic form w^T M w with w ~ N(0, I) has the law of sum_r a_r Y_r where
// a_r are the eigenvalues of M and Y_r are independent chi-squared(1)
// variables. The certificate
//
//   Q(S) = E[min(w^T (A + alpha D(S)) w, 0)]
//
// is zero exactly when A + alpha D(S) is positive semidefinite.
//
// Two evaluators are provided:
//   imhof   -int_0^R Pr(Zhat > z) dz with Zhat = -w^T M w, the survival
//           function from Imhof's characteristic-function inversion, under
//           the (R, K, N) budget. Absolute error only: once a few indices are
//           grounded, Q is far below what this path can resolve.
//   contour Laplace inversion of E[max(-W, 0)] along a vertical line through
//           the minimiser of M(c)/c^2 (M the moment generating function).
//           The integrand has no cancellation, so the result carries
//           relative accuracy even at |Q| ~ 1e-100. Default.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "groundsel/linalg.hpp"

namespace groundsel {

/// Coefficients of a weighted sum of independent chi-squared(1) variables.
class ChiSquareMix {
 public:
  explicit ChiSquareMix(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double max_coeff() const;
  double mean() const;

 private:
  std::vector<double> coeffs_;
};

/// Truncation/discretisation parameters for Q.
///   R: upper limit of the outer z-integral
///   K: upper limit of the Imhof u-integral
///   N: midpoint nodes on [0, R]
enum class QEngine { contour, imhof };

struct QuadBudget {
  double eps = 1e-3;
  double R = 0.0;
  double K = 0.0;
  long N = 2;
  QEngine engine = QEngine::contour;

  void validate() const;
};

inline constexpr double kBudgetCR = 4.0;
inline constexpr double kBudgetCK = 50.0;
inline constexpr double kBudgetCN = 1.0;
inline constexpr long kBudgetNMax = 200000;

/// Default convergence tolerance on Q(S) >= -eps_q.
inline constexpr double kDefaultEpsQ = 1e-6;

QuadBudget default_budget(const SymMatrix& a, double eps);

/// Imhof's theta(u) and log rho(u) for the mix at threshold w.
double imhof_theta(const ChiSquareMix& mix, double w, double u);
double imhof_log_rho(const ChiSquareMix& mix, double u);

/// Pr(W > w) from the Imhof integral truncated at K, clamped to [0, 1].
/// The inner integral uses midpoint rules refined by doubling on geometric
/// panels of [0, K] until successive estimates agree to `tol`.
double imhof_survival(const ChiSquareMix& mix, double w, double K, int inner_nodes = 256,
                      double tol = 1e-7);

/// Upper limit u at which Imhof's truncation bound drops below tol.
double imhof_truncation_point(const ChiSquareMix& mix, double tol);

/// e^{-z / (4 a_max)} prod_i (1 - a_i / (2 a_max))^{-1/2} >= Pr(W > z).
double tail_bound_chernoff(const ChiSquareMix& mix, double z);

/// Negated midpoint integral of the survival function of `mix` over [0, R]
/// with N nodes (an estimate of -E[max(W, 0)]), each survival value from the
/// Imhof integral truncated at K.
double negative_part_expectation(const ChiSquareMix& mix, const QuadBudget& budget);

/// E[min(W, 0)] by contour inversion, relative tolerance `rel_tol`.
double negative_part_contour(const ChiSquareMix& mix, double rel_tol = 1e-10);

/// Q computed from a spectrum of A + alpha D(S), using budget.engine.
/// `psd_tol` absorbs round-off: eigenvalues >= -psd_tol count as nonnegative.
double q_from_spectrum(const Eigen::VectorXd& eigenvalues, const QuadBudget& budget,
                       double psd_tol);

/// Q(S) for removed set S. Returns a value <= 0; exactly 0 when
/// A + alpha D(S) is positive semidefinite to within pd_tolerance.
double q_value(const SymMatrix& a, const IndexSet& removed, double alpha, const QuadBudget& budget);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample mean of min(w^T (A + alpha D(S)) w, 0) over iid standard normal w.
McEstimate q_value_mc(const SymMatrix& a, const IndexSet& removed, double alpha, long samples,
                      std::uint64_t seed);

/// Monte Carlo Pr(W > w) for each threshold, sharing one sample stream.
std::vector<McEstimate> survival_mc(const ChiSquareMix& mix, const std::vector<double>& thresholds,
                                    long samples, std::uint64_t seed);

}  // namespace groundsel
