#include "groundsel/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace groundsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::greedy_q, "greedy_q"},
    {Method::inv_trace, "inv_trace"},
    {Method::logdet, "logdet"},
    {Method::degree, "degree"},
    {Method::random, "random"},
    {Method::brute_force, "brute_force"},
    {Method::nonsymmetric, "nonsymmetric"},
}};

SymMatrix shifted(const SymMatrix& a, double beta) {
  return SymMatrix(a.dense() - beta * Eigen::MatrixXd::Identity(a.n(), a.n()));
}

void finish(SelectionResult& r, const SymMatrix& a) {
  const KeptCertificate c = certify_kept(a, r.removed, r.beta);
  r.final_lambda_min = c.lambda_min;
  r.certified = c.ok;
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& [method, n] : kMethodNames)
    if (n == name) return method;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

KeptCertificate certify_kept(const SymMatrix& a, const IndexSet& removed, double beta) {
  const IndexSet kept = removed.complement();
  if (kept.empty()) return {};
  const double lmin = lambda_min(submatrix(a, kept));
  return {lmin, lmin >= beta - pd_tolerance(a)};
}

double choose_alpha(const SymMatrix& a) {
  const Spectrum s = eig_sym(a);
  return std::max(1.0, 2.0 * (std::abs(s.min()) + s.max()));
}

SelectionResult greedy_q(const SymMatrix& a, double beta, const QuadBudget& budget,
                         const GreedyQOptions& opts) {
  budget.validate();
  const int n = a.n();
  const SymMatrix ahat = shifted(a, beta);
  const double tol = pd_tolerance(a);

  SelectionResult r;
  r.method = Method::greedy_q;
  r.beta = beta;
  double alpha = choose_alpha(ahat);

  auto kept_ok = [&](const IndexSet& removed) {
    const IndexSet kept = removed.complement();
    return !kept.empty() && lambda_min(submatrix(ahat, kept)) >= -tol;
  };

  for (int attempt = 0;; ++attempt) {
    IndexSet s = IndexSet::none(n);
    std::vector<SelectionStep> steps;
    std::vector<double> history;  // Q(S_0), Q(S_1), ...
    double q = q_value(ahat, s, alpha, budget);
    ++r.q_evals;
    history.push_back(q);

    bool restart = false;
    bool done = false;
    while (true) {
      const bool certified = kept_ok(s);
      if (certified && q >= -opts.eps_q) {
        done = true;
        break;
      }
      if (certified && attempt < opts.max_alpha_doublings) {
        // Kept block passes but Q still sees a negative part: alpha is too
        // small for the Schur complement of this kept set.
        restart = true;
        break;
      }
      if (certified) {
        r.diagnostic = "alpha doubling cap reached; accepted eigensolve-certified set";
        done = true;
        break;
      }
      if (static_cast<int>(s.size()) >= n - 1) break;

      int best = -1;
      double best_q = -kInf;
      for (int v = 0; v < n; ++v) {
        if (s.contains(v)) continue;
        const double qv = q_value(ahat, s.with(v), alpha, budget);
        ++r.q_evals;
        if (qv > best_q) {
          best_q = qv;
          best = v;
        }
      }
      s = s.with(best);
      q = best_q;
      steps.push_back({best, q});
      history.push_back(q);
    }

    if (restart) {
      alpha *= 2.0;
      ++r.alpha_escalations;
      continue;
    }

    r.removed = s;
    r.steps = std::move(steps);
    r.alpha_used = alpha;
    r.success = done;
    r.grounded_to_singleton = !done;
    if (!done) r.diagnostic = "no kept set of size >= 1 passes the certificate on this path";

    const std::size_t t = s.size();
    if (done && t >= 1) {
      const double q_empty = std::abs(history.front());
      const double q_prev = std::abs(history[t - 1]);
      // The Imhof engine only resolves Q to about budget.eps; the contour
      // engine is relatively accurate, so only an exact zero is unusable.
      const double noise = budget.engine == QEngine::imhof ? budget.eps : 0.0;
      if (q_prev <= noise) {
        r.bound_unreliable = true;
        r.bound_ratio = kInf;
      } else {
        r.bound_ratio = 1.0 + std::log(q_empty / q_prev);
      }
    }
    break;
  }

  finish(r, a);
  return r;
}

double inverse_trace_objective(const SymMatrix& l_plus, const IndexSet& kept) {
  if (kept.empty()) return 0.0;
  const SymMatrix sub = submatrix(l_plus, kept);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub.dense(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (!(ev(0) > pd_tolerance(l_plus))) return kInf;
  return ev.cwiseInverse().sum();
}

double negative_part_zeta(const SignedGraph& g) {
  const auto parts = split_signed(g);
  if (parts.second.edges().empty()) return 0.0;
  return lambda_max(laplacian(parts.second));
}

SelectionResult greedy_inv_trace(const SignedGraph& g, double rate_shift) {
  if (rate_shift < 0.0) throw std::invalid_argument("greedy_inv_trace: rate_shift must be >= 0");
  const int n = g.n();
  const SymMatrix l = laplacian(g);
  const SymMatrix l_plus = laplacian(split_signed(g).first);
  const double tol = pd_tolerance(l_plus);
  const double zeta = negative_part_zeta(g) + rate_shift;

  SelectionResult r;
  r.method = Method::inv_trace;
  r.beta = rate_shift;
  r.removed = IndexSet::none(n);

  if (zeta <= tol) {
    r.success = true;
    finish(r, l);
    return r;
  }
  const double target = 1.0 / zeta;

  // Lexicographic score (nullity of L_plus(kept), trace of its pseudo-inverse):
  // singular kept blocks have F = +inf and are ranked by how close they are to
  // invertible.
  struct Score {
    int nullity;
    double f;
    bool operator<(const Score& o) const { return nullity != o.nullity ? nullity < o.nullity : f < o.f; }
  };
  auto score = [&](const IndexSet& kept) {
    const SymMatrix sub = submatrix(l_plus, kept);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub.dense(), Eigen::EigenvaluesOnly);
    Score sc{0, 0.0};
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double v = solver.eigenvalues()(i);
      if (v > tol) {
        sc.f += 1.0 / v;
      } else {
        ++sc.nullity;
      }
    }
    return sc;
  };

  IndexSet removed = IndexSet::none(n);
  Score cur = score(removed.complement());
  while (!(cur.nullity == 0 && cur.f <= target)) {
    if (static_cast<int>(removed.size()) >= n - 1) break;
    int best = -1;
    Score best_score{std::numeric_limits<int>::max(), kInf};
    for (int v = 0; v < n; ++v) {
      if (removed.contains(v)) continue;
      const Score sc = score(removed.with(v).complement());
      if (sc < best_score) {
        best_score = sc;
        best = v;
      }
    }
    removed = removed.with(best);
    cur = best_score;
    r.steps.push_back({best, cur.nullity == 0 ? cur.f : kInf});
  }

  r.removed = removed;
  r.success = cur.nullity == 0 && cur.f <= target;
  r.grounded_to_singleton = !r.success;
  if (!r.success) r.diagnostic = "inverse-trace condition not met before one index remained";
  finish(r, l);
  return r;
}

double merikoski_bound(const SymMatrix& a) {
  const int n = a.n();
  if (n == 1) return a(0, 0);
  const double ld = log_det(a);
  const double tr = a.trace();
  return std::exp((n - 1) * (std::log(static_cast<double>(n - 1)) - std::log(tr)) + ld);
}

double default_logdet_zeta(const SymMatrix& l) { return std::max(-lambda_min(l), 0.0) + 1e-3; }

SelectionResult logdet_cardinality_sweep(const SymMatrix& l, double alpha, double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("logdet_cardinality_sweep: zeta must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("logdet_cardinality_sweep: alpha must be > 0");
  const int n = l.n();
  const double nm1 = static_cast<double>(n - 1);
  const double rhs = std::log(zeta) - (n > 1 ? nm1 * std::log(nm1) : 0.0);
  const SymMatrix base(l.dense() + zeta * Eigen::MatrixXd::Identity(n, n));
  const double tol = pd_tolerance(base);

  SelectionResult r;
  r.method = Method::logdet;
  r.beta = 0.0;
  r.alpha_used = alpha;

  // Candidate ranking: PD matrices by log det; non-PD ones (log det
  // undefined) trail, ordered by lambda_min.
  struct Score {
    bool pd;
    double value;
    bool operator>(const Score& o) const { return pd != o.pd ? pd : value > o.value; }
  };
  auto evaluate = [&](const IndexSet& s) {
    const SymMatrix m = add_alpha_diag(base, s, alpha);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ev(0) > tol) return Score{true, ev.array().log().sum()};
    return Score{false, ev(0)};
  };
  auto satisfied = [&](const Score& sc, int k) {
    if (!sc.pd) return false;
    return sc.value - nm1 * std::log(l.trace() + alpha * k + zeta * n) > rhs;
  };

  IndexSet s = IndexSet::none(n);
  Score cur = evaluate(s);
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      int best = -1;
      Score best_score{false, -kInf};
      for (int v = 0; v < n; ++v) {
        if (s.contains(v)) continue;
        const Score sc = evaluate(s.with(v));
        if (best < 0 || sc > best_score) {
          best_score = sc;
          best = v;
        }
      }
      s = s.with(best);
      cur = best_score;
      r.steps.push_back({best, cur.pd ? cur.value : -kInf});
    }
    if (satisfied(cur, k)) {
      r.success = true;
      break;
    }
  }

  r.removed = s;
  if (!r.success) {
    r.grounded_to_singleton = true;
    r.diagnostic = "log-det condition unsatisfiable for alpha=" + std::to_string(alpha) +
                   ", zeta=" + std::to_string(zeta);
  }
  finish(r, l);
  return r;
}

double min_real_part(const Eigen::MatrixXd& a, const IndexSet& kept) {
  const Eigen::MatrixXd sub = submatrix(a, kept);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(sub, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("min_real_part: eigensolver failed");
  return solver.eigenvalues().real().minCoeff();
}

SelectionResult greedy_nonsymmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& d, double beta,
                                    const QuadBudget& budget, const GreedyQOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("greedy_nonsymmetric: matrix is not square");
  const Eigen::MatrixXd shifted_a = a - beta * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const SymMatrix b = symmetrize_lyapunov(shifted_a, d);

  SelectionResult r = greedy_q(b, 0.0, budget, opts);
  r.method = Method::nonsymmetric;
  r.beta = beta;
  const IndexSet kept = r.removed.complement();
  r.final_lambda_min = min_real_part(a, kept);
  r.certified = r.final_lambda_min > beta - pd_tolerance(SymMatrix(a));
  if (r.success && !r.certified)
    throw std::runtime_error("greedy_nonsymmetric: kept block failed the real-part certificate (min Re = " +
                             std::to_string(r.final_lambda_min) + ")");
  return r;
}

SelectionResult baseline_degree(const SymMatrix& a, double beta) {
  const int n = a.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  SelectionResult r;
  r.method = Method::degree;
  r.beta = beta;
  r.removed = IndexSet::none(n);
  KeptCertificate c = certify_kept(a, r.removed, beta);
  for (std::size_t k = 0; !c.ok && static_cast<int>(r.removed.size()) < n - 1; ++k) {
    r.removed = r.removed.with(order[k]);
    c = certify_kept(a, r.removed, beta);
    r.steps.push_back({order[k], c.lambda_min});
  }
  r.success = c.ok;
  r.grounded_to_singleton = !c.ok;
  finish(r, a);
  return r;
}

SelectionResult baseline_random(const SymMatrix& a, double beta, std::uint64_t seed) {
  const int n = a.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  SelectionResult r;
  r.method = Method::random;
  r.beta = beta;
  r.removed = IndexSet::none(n);
  KeptCertificate c = certify_kept(a, r.removed, beta);
  for (std::size_t k = 0; !c.ok && static_cast<int>(r.removed.size()) < n - 1; ++k) {
    r.removed = r.removed.with(order[k]);
    c = certify_kept(a, r.removed, beta);
    r.steps.push_back({order[k], c.lambda_min});
  }
  r.success = c.ok;
  r.grounded_to_singleton = !c.ok;
  finish(r, a);
  return r;
}

SelectionResult brute_force_min_set(const SymMatrix& a, double beta) {
  const int n = a.n();
  if (n > kBruteForceMaxN)
    throw std::invalid_argument("brute_force_min_set: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kBruteForceMaxN));
  SelectionResult r;
  r.method = Method::brute_force;
  r.beta = beta;

  for (int k = 0; k < n; ++k) {
    // Lexicographic combinations of size k.
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      const IndexSet removed(comb, n);
      if (certify_kept(a, removed, beta).ok) {
        r.removed = removed;
        r.success = true;
        IndexSet partial = IndexSet::none(n);
        for (int v : comb) {
          partial = partial.with(v);
          r.steps.push_back({v, certify_kept(a, partial, beta).lambda_min});
        }
        finish(r, a);
        return r;
      }
      int i = k - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  std::vector<int> all_but_last(static_cast<std::size_t>(n - 1));
  std::iota(all_but_last.begin(), all_but_last.end(), 0);
  r.removed = IndexSet(all_but_last, n);
  r.grounded_to_singleton = true;
  r.diagnostic = "no nonempty kept set satisfies the threshold";
  finish(r, a);
  return r;
}

}  // namespace groundsel
