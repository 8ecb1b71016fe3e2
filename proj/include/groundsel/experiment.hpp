#pragma once

// Campaign runner for the node-count, negative-probability and rate sweeps.
// Every trial draws a geometric graph with seed base_seed + trial and runs
// each requested method on the same graph.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groundsel/graph.hpp"
#include "groundsel/selection.hpp"

namespace groundsel {

enum class Campaign { size_sweep, negprob_sweep, rate_sweep };

std::string_view to_string(Campaign c);
Campaign campaign_from_string(std::string_view name);

struct ExperimentSpec {
  Campaign campaign = Campaign::size_sweep;
  std::vector<double> grid;  // n values, p_neg values or beta values
  int trials = 20;
  std::uint64_t base_seed = 1;
  std::vector<Method> methods{Method::greedy_q, Method::degree, Method::random};

  // Held fixed while the grid variable moves.
  int n = 20;
  double p_negative = 0.2;
  double beta = 0.0;
  double comm_range = 300.0;
  double avg_degree = 4.0;
  double eps = 1e-3;

  void validate() const;
};

std::vector<double> default_grid(Campaign c);

/// Spec with the default grid and fixed parameters for a campaign.
ExperimentSpec default_spec(Campaign c);

struct TrialRecord {
  std::string campaign;
  std::string method;
  int n = 0;
  double p_neg = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  int removed_count = 0;
  double final_lambda_min = 0.0;
  long q_evals = 0;
  long wall_ms = 0;
  std::string status;  // ok | failed | uncertified | error: ...
  std::string removed;  // space-separated removed indices

  bool ok() const { return status == "ok"; }
};

GeomGraphConfig trial_graph_config(const ExperimentSpec& spec, double grid_value, int trial);

/// Runs one method on a graph with threshold beta on its Laplacian.
SelectionResult run_method(Method m, const SignedGraph& g, double beta, double eps, std::uint64_t seed);

struct RunOptions {
  int threads = 1;
  bool timing = false;  // record wall_ms (otherwise 0, keeping output byte-stable)
  std::optional<std::filesystem::path> graph_dir;
};

/// Worker count from GROUNDSEL_THREADS, else hardware concurrency.
int threads_from_env();

/// All rows, sorted by (campaign, method, grid value, seed).
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

std::string graph_file_name(int n, double p_neg, std::uint64_t seed);

std::string trial_csv_header();
void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& rows);
std::vector<TrialRecord> read_trial_csv(std::istream& is);

struct VerifyReport {
  int rows = 0;
  int checked = 0;
  int failures = 0;
  std::vector<std::string> messages;
};

/// Re-certifies every "ok" row: lambda_min of the kept Laplacian block must be
/// >= beta - tolerance and match the recorded value.
VerifyReport verify_records(const std::vector<TrialRecord>& rows,
                            const std::function<SignedGraph(const TrialRecord&)>& graph_for);

}  // namespace groundsel
