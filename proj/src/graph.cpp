#include "groundsel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace groundsel {

SignedGraph::SignedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("SignedGraph: node count must be >= 1");
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j) throw std::invalid_argument("SignedGraph: self-loop at node " + std::to_string(e.i));
    if (e.i < 0 || e.j >= n_) throw std::invalid_argument("SignedGraph: edge endpoint out of range");
    if (e.w == 0.0 || !std::isfinite(e.w))
      throw std::invalid_argument("SignedGraph: edge weights must be finite and nonzero");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i == b.i && a.j == b.j;
  });
  if (dup != edges_.end())
    throw std::invalid_argument("SignedGraph: duplicate edge (" + std::to_string(dup->i) + ", " +
                                std::to_string(dup->j) + ")");
}

std::size_t SignedGraph::negative_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w < 0.0; }));
}

std::vector<int> SignedGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.i)];
    ++deg[static_cast<std::size_t>(e.j)];
  }
  return deg;
}

SymMatrix laplacian(const SignedGraph& g) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) {
    l(e.i, e.j) -= e.w;
    l(e.j, e.i) -= e.w;
    l(e.i, e.i) += e.w;
    l(e.j, e.j) += e.w;
  }
  return SymMatrix(l);
}

std::pair<SignedGraph, SignedGraph> split_signed(const SignedGraph& g) {
  std::vector<Edge> pos;
  std::vector<Edge> neg;
  for (const auto& e : g.edges()) {
    if (e.w > 0.0) {
      pos.push_back(e);
    } else {
      neg.push_back({e.i, e.j, -e.w});
    }
  }
  return {SignedGraph(g.n(), std::move(pos)), SignedGraph(g.n(), std::move(neg))};
}

double deployment_side(const GeomGraphConfig& cfg) {
  // Expected degree of a uniform point ~ n * pi r^2 / side^2 (edge effects ignored).
  return cfg.comm_range * std::sqrt(std::numbers::pi * cfg.n / cfg.target_avg_degree);
}

SignedGraph random_geometric(const GeomGraphConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("random_geometric: need at least 2 nodes");
  if (!(cfg.comm_range > 0.0)) throw std::invalid_argument("random_geometric: comm_range must be > 0");
  if (!(cfg.target_avg_degree > 0.0))
    throw std::invalid_argument("random_geometric: target_avg_degree must be > 0");
  if (!(cfg.p_negative >= 0.0 && cfg.p_negative <= 1.0))
    throw std::invalid_argument("random_geometric: p_negative must lie in [0, 1]");

  const double side = deployment_side(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> x(static_cast<std::size_t>(cfg.n));
  std::vector<double> y(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) {
    x[static_cast<std::size_t>(i)] = coord(rng);
    y[static_cast<std::size_t>(i)] = coord(rng);
  }

  const double r2 = cfg.comm_range * cfg.comm_range;
  std::vector<Edge> edges;
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = i + 1; j < cfg.n; ++j) {
      const double dx = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      const double dy = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
      if (dx * dx + dy * dy <= r2) {
        const double w = unit(rng) < cfg.p_negative ? -1.0 : 1.0;
        edges.push_back({i, j, w});
      }
    }
  }
  return SignedGraph(cfg.n, std::move(edges));
}

}  // namespace groundsel
