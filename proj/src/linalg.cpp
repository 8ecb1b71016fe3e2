#include "groundsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace groundsel {

IndexSet::IndexSet(std::vector<int> members, int ambient_n)
    : members_(std::move(members)), ambient_n_(ambient_n) {
  if (ambient_n_ < 0) throw std::invalid_argument("IndexSet: negative ambient dimension");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw std::invalid_argument("IndexSet: duplicate index");
  if (!members_.empty() && (members_.front() < 0 || members_.back() >= ambient_n_))
    throw std::invalid_argument("IndexSet: index out of range for dimension " +
                                std::to_string(ambient_n_));
}

IndexSet IndexSet::all(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  return IndexSet(std::move(m), n);
}

bool IndexSet::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

IndexSet IndexSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(ambient_n_) - members_.size());
  auto it = members_.begin();
  for (int i = 0; i < ambient_n_; ++i) {
    if (it != members_.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return IndexSet(std::move(out), ambient_n_);
}

IndexSet IndexSet::with(int i) const {
  if (contains(i)) return *this;
  auto m = members_;
  m.push_back(i);
  return IndexSet(std::move(m), ambient_n_);
}

IndexSet IndexSet::without(int i) const {
  auto m = members_;
  m.erase(std::remove(m.begin(), m.end(), i), m.end());
  return IndexSet(std::move(m), ambient_n_);
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

double SymMatrix::max_abs() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

double pd_tolerance(const SymMatrix& a) { return 1e-9 * (1.0 + a.max_abs()); }

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, const IndexSet& keep) {
  if (keep.empty()) throw std::invalid_argument("empty submatrix");
  if (keep.ambient_n() != a.rows() || a.rows() != a.cols())
    throw std::invalid_argument("submatrix: index set dimension does not match matrix");
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd out(k, k);
  const auto& idx = keep.members();
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k; ++c)
      out(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  return out;
}

SymMatrix submatrix(const SymMatrix& a, const IndexSet& keep) {
  return SymMatrix(submatrix(a.dense(), keep));
}

Spectrum eig_sym(const SymMatrix& a) {
  if (a.n() == 0) throw std::invalid_argument("eig_sym: empty matrix");
  if (!a.dense().allFinite()) throw std::invalid_argument("eig_sym: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_sym: eigensolver failed");
  // Eigen sorts ascending; flip to descending.
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.basis = solver.eigenvectors().rowwise().reverse();
  return s;
}

double lambda_min(const SymMatrix& a) {
  if (a.n() == 0) throw std::invalid_argument("lambda_min: empty matrix");
  if (!a.dense().allFinite()) throw std::invalid_argument("lambda_min: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double lambda_max(const SymMatrix& a) {
  if (a.n() == 0) throw std::invalid_argument("lambda_max: empty matrix");
  if (!a.dense().allFinite()) throw std::invalid_argument("lambda_max: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(a.n() - 1);
}

SymMatrix add_alpha_diag(const SymMatrix& a, const IndexSet& s, double alpha) {
  if (s.ambient_n() != a.n())
    throw std::invalid_argument("add_alpha_diag: index set dimension does not match matrix");
  Eigen::MatrixXd m = a.dense();
  for (int i : s) m(i, i) += alpha;
  return SymMatrix(m);
}

namespace {

Eigen::VectorXd positive_spectrum(const SymMatrix& a, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (ev.size() == 0 || !(ev(0) > pd_tolerance(a)))
    throw std::domain_error(std::string(what) + " undefined: matrix is not positive definite");
  return ev;
}

}  // namespace

double inv_trace(const SymMatrix& a) {
  return positive_spectrum(a, "inverse trace").cwiseInverse().sum();
}

double log_det(const SymMatrix& a) {
  return positive_spectrum(a, "log determinant").array().log().sum();
}

SymMatrix symmetrize_lyapunov(const Eigen::MatrixXd& a, const Eigen::VectorXd& d) {
  if (a.rows() != a.cols() || a.rows() != d.size())
    throw std::invalid_argument("symmetrize_lyapunov: dimension mismatch");
  if ((d.array() <= 0.0).any())
    throw std::invalid_argument("symmetrize_lyapunov: diagonal weights must be positive");
  // B_ij = A_ji d_j + d_i A_ij
  Eigen::MatrixXd b = a.transpose() * d.asDiagonal();
  b += d.asDiagonal() * a;
  return SymMatrix(b);
}

}  // namespace groundsel
