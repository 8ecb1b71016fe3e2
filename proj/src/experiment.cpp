#include "groundsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "groundsel/io.hpp"

namespace groundsel {

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double grid_key(const TrialRecord& r) {
  if (r.campaign == "negprob_sweep") return r.p_neg;
  if (r.campaign == "rate_sweep") return r.beta;
  return r.n;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string_view to_string(Campaign c) {
  switch (c) {
    case Campaign::size_sweep: return "size_sweep";
    case Campaign::negprob_sweep: return "negprob_sweep";
    case Campaign::rate_sweep: return "rate_sweep";
  }
  return "unknown";
}

Campaign campaign_from_string(std::string_view name) {
  if (name == "size_sweep") return Campaign::size_sweep;
  if (name == "negprob_sweep") return Campaign::negprob_sweep;
  if (name == "rate_sweep") return Campaign::rate_sweep;
  throw std::invalid_argument("unknown campaign: " + std::string(name));
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (grid.empty()) throw std::invalid_argument("experiment: empty sweep grid");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods");
  for (double v : grid) {
    if (campaign == Campaign::size_sweep && (v < 2 || v != std::floor(v)))
      throw std::invalid_argument("experiment: node counts must be integers >= 2");
    if (campaign == Campaign::negprob_sweep && !(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("experiment: p_neg values must lie in [0, 1]");
  }
}

std::vector<double> default_grid(Campaign c) {
  switch (c) {
    case Campaign::size_sweep: return {20, 25, 30, 35, 40};
    case Campaign::negprob_sweep: return {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    case Campaign::rate_sweep: return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0};
  }
  return {};
}

ExperimentSpec default_spec(Campaign c) {
  ExperimentSpec s;
  s.campaign = c;
  s.grid = default_grid(c);
  if (c == Campaign::rate_sweep) s.p_negative = 0.0;
  return s;
}

GeomGraphConfig trial_graph_config(const ExperimentSpec& spec, double grid_value, int trial) {
  GeomGraphConfig cfg;
  cfg.n = spec.n;
  cfg.p_negative = spec.p_negative;
  cfg.comm_range = spec.comm_range;
  cfg.target_avg_degree = spec.avg_degree;
  cfg.seed = spec.base_seed + static_cast<std::uint64_t>(trial);
  switch (spec.campaign) {
    case Campaign::size_sweep: cfg.n = static_cast<int>(grid_value); break;
    case Campaign::negprob_sweep: cfg.p_negative = grid_value; break;
    case Campaign::rate_sweep: cfg.p_negative = 0.0; break;
  }
  return cfg;
}

SelectionResult run_method(Method m, const SignedGraph& g, double beta, double eps, std::uint64_t seed) {
  const SymMatrix l = laplacian(g);
  switch (m) {
    case Method::greedy_q: {
      const SymMatrix shifted(l.dense() - beta * Eigen::MatrixXd::Identity(l.n(), l.n()));
      return greedy_q(l, beta, default_budget(shifted, eps));
    }
    case Method::inv_trace: return greedy_inv_trace(g, beta);
    case Method::logdet: {
      const SymMatrix shifted(l.dense() - beta * Eigen::MatrixXd::Identity(l.n(), l.n()));
      SelectionResult r =
          logdet_cardinality_sweep(shifted, choose_alpha(shifted), default_logdet_zeta(shifted));
      const KeptCertificate c = certify_kept(l, r.removed, beta);
      r.beta = beta;
      r.final_lambda_min = c.lambda_min;
      r.certified = c.ok;
      return r;
    }
    case Method::degree: return baseline_degree(l, beta);
    case Method::random: return baseline_random(l, beta, seed);
    case Method::brute_force: return brute_force_min_set(l, beta);
    case Method::nonsymmetric:
      break;
  }
  throw std::invalid_argument("run_method: method " + std::string(to_string(m)) +
                              " does not apply to undirected graphs");
}

int threads_from_env() {
  if (const char* env = std::getenv("GROUNDSEL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string graph_file_name(int n, double p_neg, std::uint64_t seed) {
  return "graph_n" + std::to_string(n) + "_p" + fmt(p_neg, "%g") + "_s" + std::to_string(seed) + ".edges";
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  if (opts.graph_dir) std::filesystem::create_directories(*opts.graph_dir);

  struct Job {
    double grid_value;
    int trial;
  };
  std::vector<Job> jobs;
  for (double v : spec.grid)
    for (int t = 0; t < spec.trials; ++t) jobs.push_back({v, t});

  std::vector<std::vector<TrialRecord>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex fs_mutex;

  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const GeomGraphConfig cfg = trial_graph_config(spec, job.grid_value, job.trial);
      const double beta = spec.campaign == Campaign::rate_sweep ? job.grid_value : spec.beta;
      const SignedGraph g = random_geometric(cfg);
      if (opts.graph_dir) {
        std::lock_guard lock(fs_mutex);
        io::save_graph(*opts.graph_dir / graph_file_name(cfg.n, cfg.p_negative, cfg.seed), g);
      }
      for (Method m : spec.methods) {
        TrialRecord rec;
        rec.campaign = std::string(to_string(spec.campaign));
        rec.method = std::string(to_string(m));
        rec.n = cfg.n;
        rec.p_neg = cfg.p_negative;
        rec.beta = beta;
        rec.seed = cfg.seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const SelectionResult r = run_method(m, g, beta, spec.eps, cfg.seed);
          rec.removed_count = static_cast<int>(r.removed.size());
          rec.final_lambda_min = r.final_lambda_min;
          rec.q_evals = r.q_evals;
          rec.removed = io::format_index_list(r.removed);
          rec.status = !r.success ? "failed" : (r.certified ? "ok" : "uncertified");
        } catch (const std::exception& e) {
          rec.status = sanitize(std::string("error: ") + e.what());
        }
        if (opts.timing)
          rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        results[j].push_back(std::move(rec));
      }
    }
  };

  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<TrialRecord> rows;
  for (auto& r : results)
    for (auto& rec : r) rows.push_back(std::move(rec));
  std::stable_sort(rows.begin(), rows.end(), [](const TrialRecord& a, const TrialRecord& b) {
    if (a.campaign != b.campaign) return a.campaign < b.campaign;
    if (a.method != b.method) return a.method < b.method;
    if (grid_key(a) != grid_key(b)) return grid_key(a) < grid_key(b);
    return a.seed < b.seed;
  });
  return rows;
}

std::string trial_csv_header() {
  return "campaign,method,n,p_neg,beta,seed,removed_count,final_lambda_min,q_evals,wall_ms,status,removed";
}

void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << trial_csv_header() << '\n';
  for (const auto& r : rows) {
    os << r.campaign << ',' << r.method << ',' << r.n << ',' << fmt(r.p_neg) << ',' << fmt(r.beta) << ','
       << r.seed << ',' << r.removed_count << ',' << fmt(r.final_lambda_min) << ',' << r.q_evals << ','
       << r.wall_ms << ',' << sanitize(r.status) << ',' << r.removed << '\n';
  }
}

std::vector<TrialRecord> read_trial_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trial csv: empty input");
  if (line != trial_csv_header()) throw std::runtime_error("trial csv: unexpected header: " + line);
  std::vector<TrialRecord> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 12)
      throw std::runtime_error("trial csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(cells.size()) + " columns");
    TrialRecord r;
    r.campaign = cells[0];
    r.method = cells[1];
    r.n = std::stoi(cells[2]);
    r.p_neg = std::stod(cells[3]);
    r.beta = std::stod(cells[4]);
    r.seed = std::stoull(cells[5]);
    r.removed_count = std::stoi(cells[6]);
    r.final_lambda_min = std::stod(cells[7]);
    r.q_evals = std::stol(cells[8]);
    r.wall_ms = std::stol(cells[9]);
    r.status = cells[10];
    r.removed = cells[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

VerifyReport verify_records(const std::vector<TrialRecord>& rows,
                            const std::function<SignedGraph(const TrialRecord&)>& graph_for) {
  VerifyReport rep;
  for (const auto& r : rows) {
    ++rep.rows;
    if (!r.ok()) continue;
    ++rep.checked;
    auto fail = [&](const std::string& why) {
      ++rep.failures;
      rep.messages.push_back(r.campaign + "/" + r.method + " n=" + std::to_string(r.n) + " seed=" +
                             std::to_string(r.seed) + " beta=" + fmt(r.beta) + ": " + why);
    };
    try {
      const SignedGraph g = graph_for(r);
      if (g.n() != r.n) {
        fail("graph has " + std::to_string(g.n()) + " nodes");
        continue;
      }
      const IndexSet removed = io::parse_index_list(r.removed, g.n());
      if (static_cast<int>(removed.size()) != r.removed_count) {
        fail("removed list does not match removed_count");
        continue;
      }
      const SymMatrix l = laplacian(g);
      const KeptCertificate c = certify_kept(l, removed, r.beta);
      if (!c.ok) {
        fail("kept block lambda_min " + fmt(c.lambda_min) + " below beta");
      } else if (std::abs(c.lambda_min - r.final_lambda_min) > 1e-6 * (1.0 + std::abs(c.lambda_min))) {
        fail("recorded lambda_min " + fmt(r.final_lambda_min) + " != recomputed " + fmt(c.lambda_min));
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return rep;
}

}  // namespace groundsel
