#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "groundsel/graph.hpp"
#include "groundsel/linalg.hpp"
#include "groundsel/simulate.hpp"

namespace groundsel::io {

// Edge list: header line `n=<count>`, then one `i j w` triple per line.
// Blank lines and lines starting with '#' are ignored.
void write_edge_list(std::ostream& os, const SignedGraph& g);
SignedGraph read_edge_list(std::istream& is);
void save_graph(const std::filesystem::path& path, const SignedGraph& g);
SignedGraph load_graph(const std::filesystem::path& path);

// Dense matrix: whitespace-separated rows, one row per line.
Eigen::MatrixXd read_matrix(std::istream& is);
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);

/// Columns t, x_0, ..., x_{k-1} (kept indices in sorted order).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Parses "1,4,7", "1 4 7" or "" into an index set of dimension n.
IndexSet parse_index_list(std::string_view text, int n);
/// Space-separated members.
std::string format_index_list(const IndexSet& s);

/// printf-style "%.17g".
std::string format_double(double v);

}  // namespace groundsel::io
