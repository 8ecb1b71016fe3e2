#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "groundsel/experiment.hpp"
#include "groundsel/graph.hpp"
#include "groundsel/io.hpp"
#include "groundsel/quadform.hpp"
#include "groundsel/selection.hpp"
#include "groundsel/simulate.hpp"

namespace py = pybind11;
namespace gs = groundsel;

namespace {

gs::IndexSet to_set(const std::vector<int>& members, int n) { return gs::IndexSet(members, n); }

gs::SignedGraph make_graph(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<gs::Edge> e;
  e.reserve(edges.size());
  for (const auto& [i, j, w] : edges) e.push_back({i, j, w});
  return gs::SignedGraph(n, std::move(e));
}

gs::SymMatrix shifted(const gs::SymMatrix& a, double beta) {
  return gs::SymMatrix(a.dense() - beta * Eigen::MatrixXd::Identity(a.n(), a.n()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Row/column selection so a principal submatrix clears an eigenvalue bound.";

  py::class_<gs::SignedGraph>(m, "SignedGraph")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &gs::SignedGraph::n)
      .def_property_readonly("edges",
                             [](const gs::SignedGraph& g) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.w);
                               return out;
                             })
      .def("negative_edge_count", &gs::SignedGraph::negative_edge_count)
      .def("__repr__", [](const gs::SignedGraph& g) {
        return "SignedGraph(n=" + std::to_string(g.n()) + ", edges=" + std::to_string(g.edges().size()) + ")";
      });

  m.def("laplacian", [](const gs::SignedGraph& g) { return gs::laplacian(g).dense(); }, py::arg("graph"));
  m.def(
      "random_geometric",
      [](int n, double comm_range, double avg_degree, double p_negative, std::uint64_t seed) {
        gs::GeomGraphConfig cfg;
        cfg.n = n;
        cfg.comm_range = comm_range;
        cfg.target_avg_degree = avg_degree;
        cfg.p_negative = p_negative;
        cfg.seed = seed;
        return gs::random_geometric(cfg);
      },
      py::arg("n"), py::arg("comm_range") = 300.0, py::arg("avg_degree") = 4.0, py::arg("p_negative") = 0.2,
      py::arg("seed") = 0);
  m.def("load_graph", [](const std::string& path) { return gs::io::load_graph(path); }, py::arg("path"));

  m.def("lambda_min", [](const Eigen::MatrixXd& a) { return gs::lambda_min(gs::SymMatrix(a)); }, py::arg("a"));
  m.def(
      "submatrix", [](const Eigen::MatrixXd& a, const std::vector<int>& keep) {
        return gs::submatrix(a, to_set(keep, static_cast<int>(a.rows())));
      },
      py::arg("a"), py::arg("keep"));

  m.def(
      "imhof_survival",
      [](const std::vector<double>& coeffs, double w, double K) {
        return gs::imhof_survival(gs::ChiSquareMix(coeffs), w, K);
      },
      py::arg("coeffs"), py::arg("w"), py::arg("K") = 1e4);
  m.def(
      "q_value",
      [](const Eigen::MatrixXd& a, const std::vector<int>& removed, double alpha, double eps, bool imhof) {
        const gs::SymMatrix sa(a);
        const gs::IndexSet s = to_set(removed, sa.n());
        gs::QuadBudget b = gs::default_budget(gs::add_alpha_diag(sa, s, alpha), eps);
        if (imhof) b.engine = gs::QEngine::imhof;
        return gs::q_value(sa, s, alpha, b);
      },
      py::arg("a"), py::arg("removed"), py::arg("alpha"), py::arg("eps") = 1e-3, py::arg("imhof") = false);
  m.def(
      "q_value_mc",
      [](const Eigen::MatrixXd& a, const std::vector<int>& removed, double alpha, long samples,
         std::uint64_t seed) {
        const gs::SymMatrix sa(a);
        const auto r = gs::q_value_mc(sa, to_set(removed, sa.n()), alpha, samples, seed);
        return std::make_pair(r.estimate, r.std_error);
      },
      py::arg("a"), py::arg("removed"), py::arg("alpha"), py::arg("samples") = 100000, py::arg("seed") = 1);

  py::class_<gs::SelectionResult>(m, "SelectionResult")
      .def_property_readonly("removed", [](const gs::SelectionResult& r) { return r.removed.members(); })
      .def_property_readonly("method", [](const gs::SelectionResult& r) { return std::string(gs::to_string(r.method)); })
      .def_readonly("final_lambda_min", &gs::SelectionResult::final_lambda_min)
      .def_readonly("alpha_used", &gs::SelectionResult::alpha_used)
      .def_readonly("bound_ratio", &gs::SelectionResult::bound_ratio)
      .def_readonly("beta", &gs::SelectionResult::beta)
      .def_readonly("success", &gs::SelectionResult::success)
      .def_readonly("certified", &gs::SelectionResult::certified)
      .def_readonly("q_evals", &gs::SelectionResult::q_evals)
      .def_readonly("diagnostic", &gs::SelectionResult::diagnostic)
      .def_property_readonly("steps",
                             [](const gs::SelectionResult& r) {
                               std::vector<std::pair<int, double>> out;
                               for (const auto& s : r.steps) out.emplace_back(s.index, s.certificate);
                               return out;
                             })
      .def("__repr__", [](const gs::SelectionResult& r) {
        return "SelectionResult(method=" + std::string(gs::to_string(r.method)) +
               ", removed=[" + gs::io::format_index_list(r.removed) + "], success=" + (r.success ? "True" : "False") +
               ")";
      });

  m.def(
      "greedy_q",
      [](const Eigen::MatrixXd& a, double beta, double eps) {
        const gs::SymMatrix sa(a);
        return gs::greedy_q(sa, beta, gs::default_budget(shifted(sa, beta), eps));
      },
      py::arg("a"), py::arg("beta") = 0.0, py::arg("eps") = 1e-3);
  m.def("greedy_inv_trace", &gs::greedy_inv_trace, py::arg("graph"), py::arg("rate_shift") = 0.0);
  m.def(
      "logdet_cardinality_sweep",
      [](const Eigen::MatrixXd& l, double alpha, double zeta) {
        return gs::logdet_cardinality_sweep(gs::SymMatrix(l), alpha, zeta);
      },
      py::arg("l"), py::arg("alpha"), py::arg("zeta"));
  m.def(
      "greedy_nonsymmetric",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& d, double beta, double eps) {
        const gs::SymMatrix b =
            gs::symmetrize_lyapunov(a - beta * Eigen::MatrixXd::Identity(a.rows(), a.cols()), d);
        return gs::greedy_nonsymmetric(a, d, beta, gs::default_budget(b, eps));
      },
      py::arg("a"), py::arg("d"), py::arg("beta") = 0.0, py::arg("eps") = 1e-3);
  m.def(
      "baseline_degree", [](const Eigen::MatrixXd& a, double beta) { return gs::baseline_degree(gs::SymMatrix(a), beta); },
      py::arg("a"), py::arg("beta") = 0.0);
  m.def(
      "baseline_random",
      [](const Eigen::MatrixXd& a, double beta, std::uint64_t seed) {
        return gs::baseline_random(gs::SymMatrix(a), beta, seed);
      },
      py::arg("a"), py::arg("beta") = 0.0, py::arg("seed") = 1);
  m.def(
      "brute_force_min_set",
      [](const Eigen::MatrixXd& a, double beta) { return gs::brute_force_min_set(gs::SymMatrix(a), beta); },
      py::arg("a"), py::arg("beta") = 0.0);

  m.def(
      "consensus_trajectory",
      [](const Eigen::MatrixXd& l, const std::vector<int>& removed, const Eigen::VectorXd& x0, double horizon,
         double dt) {
        const gs::SymMatrix sl(l);
        const gs::Trajectory t = gs::consensus_trajectory(sl, to_set(removed, sl.n()), x0, horizon, dt);
        const gs::RateCheck rc = gs::verify_rate(t);
        py::dict out;
        out["times"] = t.times;
        out["states"] = t.states;
        out["kept"] = t.kept;
        out["lambda_min"] = t.lambda_min_used;
        out["envelope_holds"] = rc.holds;
        out["max_violation"] = rc.max_violation;
        return out;
      },
      py::arg("l"), py::arg("removed"), py::arg("x0"), py::arg("horizon"), py::arg("dt"));

  m.def(
      "run_experiment",
      [](const std::string& campaign, std::vector<double> grid, int trials, std::vector<std::string> methods,
         std::uint64_t seed, int threads) {
        gs::ExperimentSpec spec = gs::default_spec(gs::campaign_from_string(campaign));
        if (!grid.empty()) spec.grid = std::move(grid);
        spec.trials = trials;
        spec.base_seed = seed;
        if (!methods.empty()) {
          spec.methods.clear();
          for (const auto& name : methods) spec.methods.push_back(gs::method_from_string(name));
        }
        gs::RunOptions opts;
        opts.threads = threads;
        std::vector<gs::TrialRecord> rows;
        {
          py::gil_scoped_release release;
          rows = gs::run_experiment(spec, opts);
        }
        std::ostringstream os;
        gs::write_trial_csv(os, rows);
        return os.str();
      },
      py::arg("campaign"), py::arg("grid") = std::vector<double>{}, py::arg("trials") = 20,
      py::arg("methods") = std::vector<std::string>{}, py::arg("seed") = 1, py::arg("threads") = 1,
      "Runs a campaign and returns its CSV text.");
}
