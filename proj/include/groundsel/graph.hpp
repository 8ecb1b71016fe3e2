#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "groundsel/linalg.hpp"

namespace groundsel {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph with signed, nonzero edge weights. Edges are stored with
/// i < j, sorted, and each unordered pair appears at most once.
class SignedGraph {
 public:
  SignedGraph() = default;
  SignedGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t negative_edge_count() const;
  /// Unweighted neighbour counts.
  std::vector<int> degrees() const;

  friend bool operator==(const SignedGraph&, const SignedGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct GeomGraphConfig {
  int n = 20;
  double comm_range = 300.0;
  double target_avg_degree = 4.0;
  double p_negative = 0.2;
  std::uint64_t seed = 0;
};

SymMatrix laplacian(const SignedGraph& g);

/// (positive part, negative part with weights negated); L = L_plus - L_minus.
std::pair<SignedGraph, SignedGraph> split_signed(const SignedGraph& g);

/// Side of the square deployment region giving the target mean degree.
double deployment_side(const GeomGraphConfig& cfg);

/// Uniform points in a square; edge iff distance <= comm_range; weight -1 with
/// probability p_negative, else +1. Deterministic per seed.
SignedGraph random_geometric(const GeomGraphConfig& cfg);

}  // namespace groundsel
