// groundsel: grounded-set selection command line.
//
// Exit codes: 0 success, 1 I/O or usage error, 2 certified negative result.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "groundsel/experiment.hpp"
#include "groundsel/graph.hpp"
#include "groundsel/io.hpp"
#include "groundsel/quadform.hpp"
#include "groundsel/selection.hpp"
#include "groundsel/simulate.hpp"

namespace gs = groundsel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitNegative = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) out.push_back(std::stod(tok));
  return out;
}

struct GenGraphArgs {
  gs::GeomGraphConfig cfg;
  std::string out;
};

int cmd_gen_graph(const GenGraphArgs& a) {
  const gs::SignedGraph g = gs::random_geometric(a.cfg);
  if (a.out.empty() || a.out == "-") {
    gs::io::write_edge_list(std::cout, g);
  } else {
    gs::io::save_graph(a.out, g);
  }
  const double frac_neg =
      g.edges().empty() ? 0.0 : static_cast<double>(g.negative_edge_count()) / static_cast<double>(g.edges().size());
  std::fprintf(stderr, "n=%d edges=%zu negative_fraction=%.4f\n", g.n(), g.edges().size(), frac_neg);
  return kExitOk;
}

struct SelectArgs {
  std::string matrix_file;
  std::string graph_file;
  std::string diag_file;
  std::string method = "greedy_q";
  double beta = 0.0;
  double eps = 1e-3;
  std::uint64_t seed = 1;
  std::optional<double> alpha;
  std::optional<double> zeta;
};

int cmd_select(const SelectArgs& a) {
  const gs::Method method = gs::method_from_string(a.method);
  std::optional<gs::SignedGraph> graph;
  Eigen::MatrixXd raw;
  try {
    if (!a.graph_file.empty()) {
      graph = gs::io::load_graph(a.graph_file);
      raw = gs::laplacian(*graph).dense();
    } else {
      raw = gs::io::load_matrix(a.matrix_file);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  if (raw.rows() != raw.cols()) {
    std::fprintf(stderr, "error: matrix is %ldx%ld, expected square\n", static_cast<long>(raw.rows()),
                 static_cast<long>(raw.cols()));
    return kExitIo;
  }
  const int n = static_cast<int>(raw.rows());
  const gs::SymMatrix a_sym(raw);
  const gs::SymMatrix shifted(a_sym.dense() - a.beta * Eigen::MatrixXd::Identity(n, n));

  gs::SelectionResult r;
  switch (method) {
    case gs::Method::greedy_q:
      r = gs::greedy_q(a_sym, a.beta, gs::default_budget(shifted, a.eps));
      break;
    case gs::Method::inv_trace:
      if (!graph) {
        std::fprintf(stderr, "error: inv_trace needs --graph-file (it splits positive and negative edges)\n");
        return kExitIo;
      }
      r = gs::greedy_inv_trace(*graph, a.beta);
      break;
    case gs::Method::logdet: {
      r = gs::logdet_cardinality_sweep(shifted, a.alpha.value_or(gs::choose_alpha(shifted)),
                                       a.zeta.value_or(gs::default_logdet_zeta(shifted)));
      const gs::KeptCertificate c = gs::certify_kept(a_sym, r.removed, a.beta);
      r.beta = a.beta;
      r.final_lambda_min = c.lambda_min;
      r.certified = c.ok;
      break;
    }
    case gs::Method::degree: r = gs::baseline_degree(a_sym, a.beta); break;
    case gs::Method::random: r = gs::baseline_random(a_sym, a.beta, a.seed); break;
    case gs::Method::brute_force: r = gs::brute_force_min_set(a_sym, a.beta); break;
    case gs::Method::nonsymmetric: {
      Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
      if (!a.diag_file.empty()) {
        const Eigen::MatrixXd dm = gs::io::load_matrix(a.diag_file);
        d = Eigen::Map<const Eigen::VectorXd>(dm.data(), dm.size());
      }
      const gs::SymMatrix b = gs::symmetrize_lyapunov(raw - a.beta * Eigen::MatrixXd::Identity(n, n), d);
      r = gs::greedy_nonsymmetric(raw, d, a.beta, gs::default_budget(b, a.eps));
      break;
    }
  }

  gs::TrialRecord rec;
  rec.campaign = "select";
  rec.method = std::string(gs::to_string(method));
  rec.n = n;
  rec.beta = a.beta;
  rec.seed = a.seed;
  rec.removed_count = static_cast<int>(r.removed.size());
  rec.final_lambda_min = r.final_lambda_min;
  rec.q_evals = r.q_evals;
  rec.removed = gs::io::format_index_list(r.removed);
  rec.status = !r.success ? "failed" : (r.certified ? "ok" : "uncertified");
  if (graph) rec.p_neg = graph->edges().empty()
                             ? 0.0
                             : static_cast<double>(graph->negative_edge_count()) /
                                   static_cast<double>(graph->edges().size());
  gs::write_trial_csv(std::cout, {rec});
  std::cout << "removed: " << rec.removed << '\n';
  if (r.alpha_used) std::cout << "alpha: " << gs::io::format_double(*r.alpha_used) << '\n';
  if (r.bound_ratio) std::cout << "bound_ratio: " << gs::io::format_double(*r.bound_ratio) << '\n';
  if (!r.diagnostic.empty()) std::cerr << r.diagnostic << '\n';
  return rec.ok() ? kExitOk : kExitNegative;
}

struct SimulateArgs {
  std::string graph_file;
  std::string matrix_file;
  std::string removed;
  std::string x0;
  double horizon = 5.0;
  double dt = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  gs::SymMatrix l;
  try {
    l = !a.graph_file.empty() ? gs::laplacian(gs::io::load_graph(a.graph_file))
                              : gs::SymMatrix(gs::io::load_matrix(a.matrix_file));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  const gs::IndexSet removed = gs::io::parse_index_list(a.removed, l.n());
  const auto kept = static_cast<Eigen::Index>(l.n() - static_cast<int>(removed.size()));
  Eigen::VectorXd x0(kept);
  if (!a.x0.empty()) {
    const auto v = parse_doubles(a.x0);
    if (static_cast<Eigen::Index>(v.size()) != kept) {
      std::fprintf(stderr, "error: --x0 has %zu entries, expected %ld\n", v.size(), static_cast<long>(kept));
      return kExitIo;
    }
    for (Eigen::Index i = 0; i < kept; ++i) x0(i) = v[static_cast<std::size_t>(i)];
  } else {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < kept; ++i) x0(i) = normal(rng);
  }

  const gs::Trajectory traj = gs::consensus_trajectory(l, removed, x0, a.horizon, a.dt);
  if (a.out.empty() || a.out == "-") {
    gs::io::write_trajectory_csv(std::cout, traj);
  } else {
    std::ofstream os(a.out);
    if (!os) {
      std::fprintf(stderr, "error: cannot write %s\n", a.out.c_str());
      return kExitIo;
    }
    gs::io::write_trajectory_csv(os, traj);
  }
  const gs::RateCheck check = gs::verify_rate(traj);
  const double final_norm = traj.states.row(traj.states.rows() - 1).norm();
  std::fprintf(stderr, "lambda_min=%.12g envelope=%s max_violation=%.3e final_norm=%.6g initial_norm=%.6g\n",
               traj.lambda_min_used, check.holds ? "holds" : "violated", check.max_violation, final_norm,
               x0.norm());
  return check.holds ? kExitOk : kExitNegative;
}

struct ExperimentArgs {
  std::string spec_file;
  std::string campaign = "size_sweep";
  std::string grid;
  std::string methods;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<double> p_neg;
  std::optional<double> beta;
  std::optional<double> range;
  std::optional<double> avg_degree;
  std::optional<double> eps;
  std::string out;
  std::string graph_dir;
  bool timing = false;
};

gs::ExperimentSpec build_spec(const ExperimentArgs& a) {
  std::string campaign = a.campaign;
  nlohmann::json j;
  if (!a.spec_file.empty()) {
    std::ifstream is(a.spec_file);
    if (!is) throw std::runtime_error("cannot read " + a.spec_file);
    j = nlohmann::json::parse(is);
    campaign = j.value("campaign", campaign);
  }
  gs::ExperimentSpec s = gs::default_spec(gs::campaign_from_string(campaign));
  if (!j.is_null()) {
    if (j.contains("grid")) s.grid = j["grid"].get<std::vector<double>>();
    if (j.contains("methods")) {
      s.methods.clear();
      for (const auto& m : j["methods"]) s.methods.push_back(gs::method_from_string(m.get<std::string>()));
    }
    s.trials = j.value("trials", s.trials);
    s.base_seed = j.value("seed", s.base_seed);
    s.n = j.value("n", s.n);
    s.p_negative = j.value("p_neg", s.p_negative);
    s.beta = j.value("beta", s.beta);
    s.comm_range = j.value("range", s.comm_range);
    s.avg_degree = j.value("avg_degree", s.avg_degree);
    s.eps = j.value("eps", s.eps);
  }
  if (!a.grid.empty()) s.grid = parse_doubles(a.grid);
  if (!a.methods.empty()) {
    s.methods.clear();
    for (const auto& m : split_list(a.methods)) s.methods.push_back(gs::method_from_string(m));
  }
  if (a.trials) s.trials = *a.trials;
  if (a.seed) s.base_seed = *a.seed;
  if (a.n) s.n = *a.n;
  if (a.p_neg) s.p_negative = *a.p_neg;
  if (a.beta) s.beta = *a.beta;
  if (a.range) s.comm_range = *a.range;
  if (a.avg_degree) s.avg_degree = *a.avg_degree;
  if (a.eps) s.eps = *a.eps;
  s.validate();
  return s;
}

int cmd_experiment(const ExperimentArgs& a) {
  const gs::ExperimentSpec spec = build_spec(a);
  gs::RunOptions opts;
  opts.threads = gs::threads_from_env();
  opts.timing = a.timing;
  if (!a.graph_dir.empty()) opts.graph_dir = a.graph_dir;
  const auto rows = gs::run_experiment(spec, opts);
  if (a.out.empty() || a.out == "-") {
    gs::write_trial_csv(std::cout, rows);
  } else {
    std::ofstream os(a.out);
    if (!os) {
      std::fprintf(stderr, "error: cannot write %s\n", a.out.c_str());
      return kExitIo;
    }
    gs::write_trial_csv(os, rows);
  }
  int bad = 0;
  for (const auto& r : rows) bad += r.ok() ? 0 : 1;
  std::fprintf(stderr, "%zu rows, %d not ok\n", rows.size(), bad);
  return kExitOk;
}

struct VerifyArgs {
  std::string csv;
  std::string graph_dir;
  double range = 300.0;
  double avg_degree = 4.0;
};

int cmd_verify(const VerifyArgs& a) {
  std::ifstream is(a.csv);
  if (!is) {
    std::fprintf(stderr, "error: cannot read %s\n", a.csv.c_str());
    return kExitIo;
  }
  const auto rows = gs::read_trial_csv(is);
  auto graph_for = [&](const gs::TrialRecord& r) {
    if (!a.graph_dir.empty())
      return gs::io::load_graph(std::filesystem::path(a.graph_dir) / gs::graph_file_name(r.n, r.p_neg, r.seed));
    gs::GeomGraphConfig cfg;
    cfg.n = r.n;
    cfg.p_negative = r.p_neg;
    cfg.seed = r.seed;
    cfg.comm_range = a.range;
    cfg.target_avg_degree = a.avg_degree;
    return gs::random_geometric(cfg);
  };
  const gs::VerifyReport rep = gs::verify_records(rows, graph_for);
  for (const auto& m : rep.messages) std::fprintf(stderr, "FAIL %s\n", m.c_str());
  std::printf("rows=%d checked=%d failures=%d\n", rep.rows, rep.checked, rep.failures);
  return rep.failures == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groundsel: select rows/columns so the kept principal submatrix clears an eigenvalue bound"};
  app.require_subcommand(1);

  GenGraphArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-graph", "Generate a signed geometric random graph (edge list)");
  gen_cmd->add_option("--n", gen.cfg.n, "Node count")->required();
  gen_cmd->add_option("--range", gen.cfg.comm_range, "Communication range")->capture_default_str();
  gen_cmd->add_option("--avg-degree", gen.cfg.target_avg_degree, "Target mean degree")->capture_default_str();
  gen_cmd->add_option("--p-neg", gen.cfg.p_negative, "Probability an edge has weight -1")->capture_default_str();
  gen_cmd->add_option("--seed", gen.cfg.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--out,-o", gen.out, "Output file (default stdout)");

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "Select a removed set for a matrix or graph Laplacian");
  auto* mf = sel_cmd->add_option("--matrix-file", sel.matrix_file, "Whitespace-separated matrix");
  auto* gf = sel_cmd->add_option("--graph-file", sel.graph_file, "Edge list; its Laplacian is used");
  mf->excludes(gf);
  sel_cmd->add_option("--diag-file", sel.diag_file, "Positive weights d for --method nonsymmetric");
  sel_cmd->add_option("--method", sel.method,
                      "greedy_q | inv_trace | logdet | degree | random | brute_force | nonsymmetric")
      ->capture_default_str();
  sel_cmd->add_option("--beta", sel.beta, "Eigenvalue threshold")->capture_default_str();
  sel_cmd->add_option("--eps", sel.eps, "Quadrature tolerance for Q")->capture_default_str();
  sel_cmd->add_option("--seed", sel.seed, "Seed for --method random")->capture_default_str();
  sel_cmd->add_option("--alpha", sel.alpha, "Grounding weight for --method logdet");
  sel_cmd->add_option("--zeta", sel.zeta, "Regulariser for --method logdet");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate grounded consensus and check the decay envelope");
  auto* sgf = sim_cmd->add_option("--graph-file", sim.graph_file, "Edge list");
  auto* smf = sim_cmd->add_option("--matrix-file", sim.matrix_file, "Symmetric matrix used as L");
  sgf->excludes(smf);
  sim_cmd->add_option("--removed", sim.removed, "Removed (input) indices, comma separated");
  sim_cmd->add_option("--x0", sim.x0, "Initial kept-node states (default: seeded normal draws)");
  sim_cmd->add_option("--horizon", sim.horizon, "Final time")->capture_default_str();
  sim_cmd->add_option("--dt", sim.dt, "Sampling interval")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Seed for the default x0")->capture_default_str();
  sim_cmd->add_option("--out,-o", sim.out, "Trajectory CSV (default stdout)");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Run a sweep campaign and write one CSV row per trial and method");
  ex_cmd->add_option("--spec", ex.spec_file, "JSON campaign spec; flags override its fields");
  ex_cmd->add_option("--campaign", ex.campaign, "size_sweep | negprob_sweep | rate_sweep")->capture_default_str();
  ex_cmd->add_option("--grid", ex.grid, "Sweep values, comma separated");
  ex_cmd->add_option("--methods", ex.methods, "Methods, comma separated");
  ex_cmd->add_option("--trials", ex.trials, "Trials per grid point");
  ex_cmd->add_option("--seed", ex.seed, "Base seed; trial t uses seed + t");
  ex_cmd->add_option("--n", ex.n, "Node count (negprob/rate sweeps)");
  ex_cmd->add_option("--p-neg", ex.p_neg, "Negative-edge probability (size sweep)");
  ex_cmd->add_option("--beta", ex.beta, "Threshold (size/negprob sweeps)");
  ex_cmd->add_option("--range", ex.range, "Communication range");
  ex_cmd->add_option("--avg-degree", ex.avg_degree, "Target mean degree");
  ex_cmd->add_option("--eps", ex.eps, "Quadrature tolerance for Q");
  ex_cmd->add_option("--out,-o", ex.out, "Output CSV (default stdout)");
  ex_cmd->add_option("--graph-dir", ex.graph_dir, "Also store every generated graph here");
  ex_cmd->add_flag("--timing", ex.timing, "Record wall_ms (output is then not byte-reproducible)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Re-certify every ok row of a campaign CSV");
  ver_cmd->add_option("--csv", ver.csv, "Campaign CSV")->required();
  ver_cmd->add_option("--graph-dir", ver.graph_dir, "Directory written by experiment --graph-dir");
  ver_cmd->add_option("--range", ver.range, "Range used to regenerate graphs")->capture_default_str();
  ver_cmd->add_option("--avg-degree", ver.avg_degree, "Mean degree used to regenerate graphs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }

  try {
    if (*gen_cmd) return cmd_gen_graph(gen);
    if (*sel_cmd) {
      if (sel.matrix_file.empty() && sel.graph_file.empty()) {
        std::fprintf(stderr, "error: select needs --matrix-file or --graph-file\n");
        return kExitIo;
      }
      return cmd_select(sel);
    }
    if (*sim_cmd) {
      if (sim.matrix_file.empty() && sim.graph_file.empty()) {
        std::fprintf(stderr, "error: simulate needs --graph-file or --matrix-file\n");
        return kExitIo;
      }
      return cmd_simulate(sim);
    }
    if (*ex_cmd) return cmd_experiment(ex);
    if (*ver_cmd) return cmd_verify(ver);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitIo;
}
