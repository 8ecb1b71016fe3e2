#include "groundsel/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace groundsel {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_zero(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [](double a) { return a == 0.0; });
}

// Composite midpoint rule on [lo, hi], doubled until two successive
// estimates agree to `tol` (or the node cap is reached).
template <typename F>
double midpoint_refined(const F& f, double lo, double hi, long nodes, double tol) {
  constexpr long kMaxNodes = 1L << 22;
  auto rule = [&](long n) {
    const double h = (hi - lo) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += f(lo + (static_cast<double>(i) + 0.5) * h);
    return s * h;
  };
  double prev = rule(nodes);
  while (nodes < kMaxNodes) {
    nodes *= 2;
    const double next = rule(nodes);
    if (std::abs(next - prev) < tol) return next;
    prev = next;
  }
  return prev;
}

}  // namespace

ChiSquareMix::ChiSquareMix(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("ChiSquareMix: need at least one coefficient");
  for (double a : coeffs_)
    if (!std::isfinite(a)) throw std::invalid_argument("ChiSquareMix: non-finite coefficient");
}

double ChiSquareMix::max_coeff() const { return *std::max_element(coeffs_.begin(), coeffs_.end()); }

double ChiSquareMix::mean() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0); }

void QuadBudget::validate() const {
  if (!(eps > 0.0) || !(R > 0.0) || !(K > 0.0) || N < 2)
    throw std::invalid_argument("QuadBudget: require eps > 0, R > 0, K > 0, N >= 2");
}

QuadBudget default_budget(const SymMatrix& a, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("default_budget: eps must be > 0");
  const Spectrum s = eig_sym(a);
  const double tol = pd_tolerance(a);
  double abs_max = 0.0;
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double v = std::abs(s.eigenvalues(i));
    abs_max = std::max(abs_max, v);
    if (v > tol) min_nonzero = std::min(min_nonzero, v);
  }
  QuadBudget b;
  b.eps = eps;
  b.R = kBudgetCR * (-std::log(eps) + a.n()) * std::max(abs_max, 1.0);
  b.K = kBudgetCK / std::max(std::isfinite(min_nonzero) ? min_nonzero : 0.0, eps);
  const double n_raw = std::ceil(kBudgetCN * b.R / eps);
  b.N = std::clamp(static_cast<long>(std::min(n_raw, 1e15)), 2L, kBudgetNMax);
  return b;
}

double imhof_theta(const ChiSquareMix& mix, double w, double u) {
  double s = 0.0;
  for (double a : mix.coeffs()) s += std::atan(a * u);
  return 0.5 * s - 0.5 * w * u;
}

double imhof_log_rho(const ChiSquareMix& mix, double u) {
  double s = 0.0;
  for (double a : mix.coeffs()) s += std::log1p(a * a * u * u);
  return 0.25 * s;
}

double imhof_survival(const ChiSquareMix& mix, double w, double K, int inner_nodes, double tol) {
  if (!(K > 0.0)) throw std::invalid_argument("imhof_survival: K must be > 0");
  if (inner_nodes < 8) throw std::invalid_argument("imhof_survival: need at least 8 inner nodes");
  if (all_zero(mix.coeffs())) throw std::invalid_argument("degenerate distribution");

  const auto& c = mix.coeffs();
  const bool nonneg = std::all_of(c.begin(), c.end(), [](double a) { return a >= 0.0; });
  const bool nonpos = std::all_of(c.begin(), c.end(), [](double a) { return a <= 0.0; });
  if (nonneg && w <= 0.0) return 1.0;
  if (nonpos && w >= 0.0) return 0.0;

  const double slope0 = 0.5 * (mix.mean() - w);
  auto integrand = [&](double u) {
    if (u < 1e-300) return slope0;
    return std::sin(imhof_theta(mix, w, u)) / (u * std::exp(imhof_log_rho(mix, u)));
  };

  // Geometric panels: [0, p0], [p0, 2 p0], [2 p0, 4 p0], ...
  double amax = 0.0;
  for (double a : c) amax = std::max(amax, std::abs(a));
  double edge = std::min(K, 1.0 / std::max(amax, 0.5 * std::abs(w)));
  int panels = 1;
  for (double e = edge; e < K; e *= 2.0) ++panels;
  const double panel_tol = tol / panels;

  double integral = midpoint_refined(integrand, 0.0, edge, inner_nodes, panel_tol);
  while (edge < K) {
    const double next = std::min(K, 2.0 * edge);
    integral += midpoint_refined(integrand, edge, next, inner_nodes, panel_tol);
    edge = next;
  }
  return std::clamp(0.5 + integral / kPi, 0.0, 1.0);
}

double imhof_truncation_point(const ChiSquareMix& mix, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("imhof_truncation_point: tol must be > 0");
  // Truncation error at K is at most [pi (m/2) K^{m/2} prod |a_r|^{1/2}]^{-1}.
  double log_prod = 0.0;
  int m = 0;
  for (double a : mix.coeffs()) {
    if (a == 0.0) continue;
    log_prod += 0.5 * std::log(std::abs(a));
    ++m;
  }
  if (m == 0) throw std::invalid_argument("degenerate distribution");
  const double half_m = 0.5 * m;
  const double log_k = -(std::log(kPi * half_m * tol) + log_prod) / half_m;
  return std::exp(log_k);
}

double tail_bound_chernoff(const ChiSquareMix& mix, double z) {
  if (z < 0.0) throw std::invalid_argument("tail_bound_chernoff: z must be >= 0");
  const double amax = mix.max_coeff();
  if (!(amax > 0.0))
    throw std::invalid_argument("tail_bound_chernoff: no positive coefficient, tail is identically zero");
  double log_b = -z / (4.0 * amax);
  for (double a : mix.coeffs()) log_b -= 0.5 * std::log1p(-a / (2.0 * amax));
  return std::exp(log_b);
}

double negative_part_expectation(const ChiSquareMix& mix, const QuadBudget& budget) {
  budget.validate();
  const double amax = mix.max_coeff();
  if (!(amax > 0.0)) return 0.0;

  const double h = budget.R / static_cast<double>(budget.N);

  // Drop midpoint nodes beyond the point where the Chernoff tail integral,
  // 4 a_max P e^{-z/(4 a_max)}, falls below eps/10. The survival function is
  // decreasing, so the dropped nodes sum to at most the tail from R' - h.
  long n_nodes = budget.N;
  {
    double log_p = 0.0;
    for (double a : mix.coeffs()) log_p -= 0.5 * std::log1p(-a / (2.0 * amax));
    const double r_tail = 4.0 * amax * (std::log(4.0 * amax / (0.1 * budget.eps)) + log_p) + h;
    if (r_tail > 0.0 && r_tail < budget.R)
      n_nodes = std::max(2L, static_cast<long>(std::ceil(r_tail / h)));
  }
  const double r_eff = h * static_cast<double>(n_nodes);

  // Sum over the z-nodes of sin(theta0(u) - z_i u / 2) in closed form:
  //   sin(R u / 4) / sin(h u / 4) * sin(theta0(u) - R u / 4).
  const auto& c = mix.coeffs();
  const double half_sum = 0.5 * mix.mean();
  const double q = 0.25 * r_eff;
  const double g0 = (1.0 / kPi) * r_eff * (half_sum - q);
  auto fused = [&](double u) {
    if (u < 1e-300) return g0;
    double theta0 = 0.0;
    double log_rho = 0.0;
    for (double a : c) {
      theta0 += std::atan(a * u);
      log_rho += std::log1p(a * a * u * u);
    }
    theta0 *= 0.5;
    log_rho *= 0.25;
    const double x = 0.25 * h * u;
    const double sx = std::sin(x);
    double kernel;
    if (std::abs(sx) < 1e-12 * std::max(1.0, x)) {
      kernel = static_cast<double>(n_nodes) * std::cos(q * u) / std::cos(x);
    } else {
      kernel = std::sin(q * u) / sx;
    }
    return (h / kPi) * kernel * std::sin(theta0 - q * u) / (u * std::exp(log_rho));
  };

  // |fused(u)| <= 2 / (u^2 rho(u)) while h u / 4 <= pi / 2, so the tail past
  // U is at most 2 / (U rho(U)).
  double upper = budget.K;
  {
    const double cap = std::min(budget.K, 2.0 * kPi / h);
    double abs_coeff_max = 0.0;
    for (double a : c) abs_coeff_max = std::max(abs_coeff_max, std::abs(a));
    double u = std::min(cap, 1.0 / std::max(abs_coeff_max, 1e-300));
    const double target = budget.eps / 20.0;
    while (u < cap) {
      if (2.0 / (u * std::exp(imhof_log_rho(mix, u))) < target) break;
      u = std::min(cap, 1.25 * u);
    }
    if (u < cap || cap == budget.K) upper = u;
  }

  // Gauss panels one oscillation of sin(R u / 2) wide.
  const double period = 4.0 * kPi / r_eff;
  constexpr long kMaxPanels = 200000;
  long panels = static_cast<long>(std::ceil(upper / period));
  panels = std::clamp(panels, 1L, kMaxPanels);
  const double width = upper / static_cast<double>(panels);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  double integral = 0.0;
  for (long p = 0; p < panels; ++p) {
    const double lo = width * static_cast<double>(p);
    integral += Rule::integrate(fused, lo, lo + width);
  }

  const double positive_part = 0.5 * r_eff + integral;
  return -std::max(positive_part, 0.0);
}

double negative_part_contour(const ChiSquareMix& mix, double rel_tol) {
  const auto& a = mix.coeffs();
  const double amin = std::min(0.0, *std::min_element(a.begin(), a.end()));
  const double amax = mix.max_coeff();
  if (amin == 0.0) return 0.0;
  if (amax <= 0.0) return mix.mean();

  // For c < 0, max(-x, 0) = (1 / 2 pi i) int_{c - i inf}^{c + i inf} e^{t x} / t^2 dt,
  // so E[max(-W, 0)] = (1 / pi) int_0^inf Re[M(c + i y) / (c + i y)^2] dy for
  // any c in (1 / (2 a_min), 0). Take c where M(c) / c^2 is smallest: the
  // log of it is convex in c, so bisect on its derivative.
  auto slope = [&](double c) {
    double d = -2.0 / c;
    for (double x : a) d += x / (1.0 - 2.0 * x * c);
    return d;
  };
  double lo = 1.0 / (2.0 * amin);
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? hi : lo) = mid;
  }
  const double c = 0.5 * (lo + hi);

  double curvature = 2.0 / (c * c);
  double log_scale = 2.0 * std::log(-c);  // log(c^2 / M(c))
  for (double x : a) {
    const double f = 1.0 - 2.0 * x * c;
    curvature += 2.0 * x * x / (f * f);
    log_scale += 0.5 * std::log(f);
  }
  const double width = 1.0 / std::sqrt(curvature);

  // y = width tan(phi) maps the algebraic tail onto a finite interval.
  auto integrand = [&](double phi) {
    if (phi >= 0.5 * kPi) return 0.0;
    const double cos_phi = std::cos(phi);
    const std::complex<double> t(c, width * std::tan(phi));
    std::complex<double> log_f = log_scale - 2.0 * std::log(t);
    for (double x : a) log_f -= 0.5 * std::log(1.0 - 2.0 * x * t);
    return std::real(std::exp(log_f)) * width / (cos_phi * cos_phi);
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 0.5 * kPi, 15,
                                                                                 rel_tol, &err);
  return -std::max(v, 0.0) / kPi * std::exp(-log_scale);
}

double q_from_spectrum(const Eigen::VectorXd& eigenvalues, const QuadBudget& budget,
                       double psd_tol) {
  if (eigenvalues.size() == 0) return 0.0;
  if (eigenvalues.minCoeff() >= -psd_tol) return 0.0;

  std::vector<double> coeffs;
  double negative_sum = 0.0;
  bool any_positive = false;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues(i);
    if (std::abs(v) <= psd_tol) continue;
    if (v < 0.0) negative_sum += v;
    any_positive = any_positive || v > 0.0;
    coeffs.push_back(v);
  }
  // Every nonzero eigenvalue negative: the form is nonpositive, Q = E[Z].
  if (!any_positive) return negative_sum;
  if (budget.engine == QEngine::contour) return negative_part_contour(ChiSquareMix(std::move(coeffs)));
  for (double& v : coeffs) v = -v;
  return std::min(negative_part_expectation(ChiSquareMix(std::move(coeffs)), budget), 0.0);
}

double q_value(const SymMatrix& a, const IndexSet& removed, double alpha, const QuadBudget& budget) {
  budget.validate();
  const SymMatrix m = add_alpha_diag(a, removed, alpha);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("q_value: eigensolver failed");
  return q_from_spectrum(solver.eigenvalues(), budget, pd_tolerance(m));
}

McEstimate q_value_mc(const SymMatrix& a, const IndexSet& removed, double alpha, long samples,
                      std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("q_value_mc: need at least 1000 samples");
  const Eigen::MatrixXd m = add_alpha_diag(a, removed, alpha).dense();
  const Eigen::Index n = m.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd w(n);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) w(i) = normal(rng);
    const double v = std::min(w.dot(m * w), 0.0);
    sum += v;
    sum_sq += v * v;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double var = std::max(sum_sq / ns - mean * mean, 0.0);
  return {mean, std::sqrt(var / (ns - 1.0))};
}

std::vector<McEstimate> survival_mc(const ChiSquareMix& mix, const std::vector<double>& thresholds,
                                    long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("survival_mc: need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<long> hits(thresholds.size(), 0);
  for (long s = 0; s < samples; ++s) {
    double w = 0.0;
    for (double a : mix.coeffs()) {
      const double z = normal(rng);
      w += a * z * z;
    }
    for (std::size_t t = 0; t < thresholds.size(); ++t)
      if (w > thresholds[t]) ++hits[t];
  }
  std::vector<McEstimate> out;
  out.reserve(thresholds.size());
  const double ns = static_cast<double>(samples);
  for (long k : hits) {
    const double p = static_cast<double>(k) / ns;
    out.push_back({p, std::sqrt(p * (1.0 - p) / ns)});
  }
  return out;
}

}  // namespace groundsel
