#pragma once

// Row/column selection: find a small removed set S such that the kept
// principal submatrix A(V \ S) has every eigenvalue >= beta.
//
// All public entry points take and return the REMOVED set.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "groundsel/graph.hpp"
#include "groundsel/linalg.hpp"
#include "groundsel/quadform.hpp"

namespace groundsel {

enum class Method { greedy_q, inv_trace, logdet, degree, random, brute_force, nonsymmetric };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct SelectionStep {
  int index = -1;
  double certificate = std::numeric_limits<double>::quiet_NaN();
};

struct SelectionResult {
  IndexSet removed;
  Method method = Method::greedy_q;
  std::vector<SelectionStep> steps;
  /// lambda_min of the kept block; for the non-symmetric path, the smallest
  /// real part of its eigenvalues.
  double final_lambda_min = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> alpha_used;
  double beta = 0.0;
  /// 1 + ln(|Q(empty)| / |Q(S_{T-1})|); set by greedy_q when |S| >= 1.
  std::optional<double> bound_ratio;

  bool success = false;                // the method's own stopping rule was met
  bool certified = false;              // independent eigensolve confirms the kept block
  bool grounded_to_singleton = false;  // ran down to one kept index without success
  bool bound_unreliable = false;       // Q(S_{T-1}) within quadrature noise of 0
  int alpha_escalations = 0;
  long q_evals = 0;
  std::string diagnostic;

  int kept_count() const { return removed.ambient_n() - static_cast<int>(removed.size()); }
};

struct KeptCertificate {
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
};

/// lambda_min(A(V \ removed)) >= beta - pd_tolerance(A).
KeptCertificate certify_kept(const SymMatrix& a, const IndexSet& removed, double beta);

/// Initial grounding weight: max(1, 2 (|lambda_min(A)| + lambda_max(A))).
double choose_alpha(const SymMatrix& a);

struct GreedyQOptions {
  double eps_q = kDefaultEpsQ;
  int max_alpha_doublings = 40;
};

/// Greedy maximisation of Q(S) on A - beta I until Q(S) >= -eps_q and the
/// kept block is certified. Doubles alpha and restarts whenever the kept block
/// is certified while Q still reports a negative part.
SelectionResult greedy_q(const SymMatrix& a, double beta, const QuadBudget& budget,
                         const GreedyQOptions& opts = {});

/// F(kept) = trace(L_plus(kept)^{-1}); +inf when L_plus(kept) is singular.
double inverse_trace_objective(const SymMatrix& l_plus, const IndexSet& kept);

/// Largest eigenvalue of the negative-edge Laplacian (0 without negative edges).
double negative_part_zeta(const SignedGraph& g);

/// Greedy removal minimising F until F(kept) <= 1 / (zeta + rate_shift).
SelectionResult greedy_inv_trace(const SignedGraph& g, double rate_shift = 0.0);

/// ((n - 1) / trace(A))^{n-1} det(A), a lower bound on lambda_min of a PD matrix.
double merikoski_bound(const SymMatrix& a);

/// Default regulariser for the log-det sweep: max(-lambda_min(L), 0) + 1e-3.
double default_logdet_zeta(const SymMatrix& l);

/// Smallest k for which the greedy size-k set satisfies
///   log det(L + alpha D(S) + zeta I) - (n - 1) log(trace(L) + alpha k + zeta n)
///     > log zeta - (n - 1) log(n - 1).
SelectionResult logdet_cardinality_sweep(const SymMatrix& l, double alpha, double zeta);

/// greedy_q on B = (A - beta I)^T D + D (A - beta I), certified by a general
/// eigensolve of A(kept). Throws std::runtime_error if a reported success
/// fails the certificate.
SelectionResult greedy_nonsymmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& d, double beta,
                                    const QuadBudget& budget, const GreedyQOptions& opts = {});

/// Smallest real part among the eigenvalues of A(kept).
double min_real_part(const Eigen::MatrixXd& a, const IndexSet& kept);

/// Removes the largest remaining diagonal entry until the kept block passes.
SelectionResult baseline_degree(const SymMatrix& a, double beta);

/// Removes uniformly random indices until the kept block passes.
SelectionResult baseline_random(const SymMatrix& a, double beta, std::uint64_t seed);

inline constexpr int kBruteForceMaxN = 16;

/// Exhaustive minimum removed set, lexicographically first among ties.
SelectionResult brute_force_min_set(const SymMatrix& a, double beta);

}  // namespace groundsel
