#include "groundsel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace groundsel::io {

namespace {

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_edge_list(std::ostream& os, const SignedGraph& g) {
  os << "n=" << g.n() << '\n';
  for (const auto& e : g.edges()) os << e.i << ' ' << e.j << ' ' << format_double(e.w) << '\n';
}

SignedGraph read_edge_list(std::istream& is) {
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    if (n < 0) {
      const auto pos = line.find("n=");
      if (pos == std::string::npos) throw std::runtime_error("edge list: missing `n=<count>` header");
      n = std::stoi(line.substr(pos + 2));
      continue;
    }
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.i >> e.j >> e.w))
      throw std::runtime_error("edge list: malformed line " + std::to_string(line_no));
    edges.push_back(e);
  }
  if (n < 0) throw std::runtime_error("edge list: missing `n=<count>` header");
  return SignedGraph(n, std::move(edges));
}

void save_graph(const std::filesystem::path& path, const SignedGraph& g) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(os, g);
}

SignedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_edge_list(is);
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw std::runtime_error("matrix: non-numeric entry on row " + std::to_string(rows.size()));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw std::runtime_error("matrix: no rows");
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != m.cols())
      throw std::runtime_error("matrix: ragged row " + std::to_string(r));
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_matrix(is);
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(m(r, c));
    }
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << 't';
  for (Eigen::Index c = 0; c < traj.states.cols(); ++c) os << ",x_" << c;
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    for (Eigen::Index c = 0; c < traj.states.cols(); ++c)
      os << ',' << format_double(traj.states(static_cast<Eigen::Index>(k), c));
    os << '\n';
  }
}

IndexSet parse_index_list(std::string_view text, int n) {
  std::string s(text);
  for (char& ch : s)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream ls(s);
  std::vector<int> out;
  std::string tok;
  while (ls >> tok) {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("index list: bad token '" + tok + "'");
    out.push_back(v);
  }
  return IndexSet(std::move(out), n);
}

std::string format_index_list(const IndexSet& s) {
  std::string out;
  for (int v : s) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

}  // namespace groundsel::io
