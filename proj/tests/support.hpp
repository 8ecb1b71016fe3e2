#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "groundsel/graph.hpp"
#include "groundsel/linalg.hpp"

namespace testsupport {

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * normal(rng);
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_pd(int n, std::mt19937_64& rng, double floor = 0.1) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
  return b * b.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
}

inline groundsel::IndexSet random_subset(int n, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution keep(p);
  std::vector<int> m;
  for (int i = 0; i < n; ++i)
    if (keep(rng)) m.push_back(i);
  return groundsel::IndexSet(m, n);
}

// Random signed graph on n nodes: each pair joined with probability p_edge,
// weight -1 with probability p_neg, else +1.
inline groundsel::SignedGraph random_signed_graph(int n, double p_edge, double p_neg, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p_edge), neg(p_neg);
  std::vector<groundsel::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) edges.push_back({i, j, neg(rng) ? -1.0 : 1.0});
  return groundsel::SignedGraph(n, edges);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Dense determinant by partial-pivot elimination.
inline double det_by_pivots(Eigen::MatrixXd m) {
  const auto n = m.rows();
  double det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index r = k + 1; r < n; ++r)
      if (std::abs(m(r, k)) > std::abs(m(p, k))) p = r;
    if (p != k) {
      m.row(p).swap(m.row(k));
      det = -det;
    }
    det *= m(k, k);
    for (Eigen::Index r = k + 1; r < n; ++r) m.row(r) -= (m(r, k) / m(k, k)) * m.row(k);
  }
  return det;
}

}  // namespace testsupport
