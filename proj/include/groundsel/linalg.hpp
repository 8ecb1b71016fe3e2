#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace groundsel {

/// Sorted, duplicate-free subset of {0, ..., ambient_n - 1}.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> members, int ambient_n);
  IndexSet(std::initializer_list<int> members, int ambient_n)
      : IndexSet(std::vector<int>(members), ambient_n) {}

  static IndexSet none(int n) { return IndexSet(std::vector<int>{}, n); }
  static IndexSet all(int n);

  const std::vector<int>& members() const { return members_; }
  int ambient_n() const { return ambient_n_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(int i) const;

  IndexSet complement() const;
  IndexSet with(int i) const;
  IndexSet without(int i) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> members_;
  int ambient_n_ = 0;
};

/// Dense real symmetric matrix. Construction symmetrizes (M + M^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }
  static SymMatrix zeros(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  int n() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& dense() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double max_abs() const;
  double trace() const { return m_.trace(); }

 private:
  Eigen::MatrixXd m_;
};

/// Eigendecomposition A = U diag(eigenvalues) U^T, eigenvalues sorted descending.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;

  double min() const { return eigenvalues(eigenvalues.size() - 1); }
  double max() const { return eigenvalues(0); }
};

// Scale-aware strict positivity threshold: 1e-9 * (1 + max |a_ij|).
double pd_tolerance(const SymMatrix& a);

SymMatrix submatrix(const SymMatrix& a, const IndexSet& keep);
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, const IndexSet& keep);

Spectrum eig_sym(const SymMatrix& a);
double lambda_min(const SymMatrix& a);
double lambda_max(const SymMatrix& a);

/// A + alpha * D(s), D(s) the 0/1 diagonal indicator of s.
SymMatrix add_alpha_diag(const SymMatrix& a, const IndexSet& s, double alpha);

// Both require lambda_min(a) > pd_tolerance(a); throw std::domain_error otherwise.
double inv_trace(const SymMatrix& a);
double log_det(const SymMatrix& a);

/// B = A^T D + D A with D = diag(d), d > 0 entrywise.
SymMatrix symmetrize_lyapunov(const Eigen::MatrixXd& a, const Eigen::VectorXd& d);

}  // namespace groundsel
