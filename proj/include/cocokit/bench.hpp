#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocokit/dag.hpp"
#include "cocokit/decision_set.hpp"
#include "cocokit/metrics.hpp"
#include "cocokit/rng.hpp"
#include "cocokit/types.hpp"

namespace cocokit::bench {

/** Hub-and-spoke network in the RIPE-Atlas style: star edges carry the
 *  per-node measured latency/bandwidth, extra edges sum latencies and take
 *  the min bandwidth of their endpoints. Edges are oriented along a random
 *  topological order so the graph stays a DAG; the two-edge source-hub-sink
 *  path is planted with boosted bandwidth and trimmed latency so a feasible
 *  benchmark route always exists. */
struct NetworkInstance {
  Dag dag;
  int source = 0;
  int sink = 0;
  vector_t base_latency;    // ms
  vector_t base_bandwidth;  // Mbps
  std::vector<int> planted_path;  // edge indices
};

NetworkInstance generate_network(std::uint64_t seed, int nodes,
                                 int extra_edges);

/** Per-round perturbation: latency scaled by U[0.5, 1.5], bandwidth by
 *  U[0.8, 1.2] per edge; threshold = beta * (planted path bandwidth). */
struct RoundData {
  vector_t latency;
  vector_t bandwidth;
  scalar_t threshold = 0.0;
};

RoundData perturb_round(const NetworkInstance& inst, Rng& rng, scalar_t beta);

/** f_t(x) = <latency_t, x>; g_t(x) = threshold - <bandwidth_t, x>. Linear, so
 *  the gradients are exact. */
FirstOrderFeedback round_functions(const RoundData& rd, const vector_t& x);

struct Comparator {
  vector_t x_star;
  scalar_t cum_cost = 0.0;
  bool planted_fallback = false;
  std::vector<int> path;
};

/** Best fixed s-d route feasible in every round, by exhaustive enumeration;
 *  falls back to the planted path when the instance has more than `max_paths`
 *  routes. Throws when enumeration finds no feasible route. */
Comparator hindsight_comparator(const NetworkInstance& inst,
                                const std::vector<RoundData>& rounds,
                                std::size_t max_paths = 100000);

/** Synthetic linear cost/constraint stream over box/simplex/ball with a
 *  planted point that is strictly feasible in every round (margin derived
 *  from beta). The planted point sits at the minimizer of the mean cost, so
 *  it doubles as the regret benchmark. */
struct LinearInstance {
  DecisionSet set;
  vector_t cost_base;        // a0
  vector_t constraint_base;  // b0
  vector_t planted;
  scalar_t margin = 0.0;
  scalar_t noise = 0.0;
  scalar_t lipschitz_bound = 0.0;  // G
  scalar_t value_bound_f = 0.0;    // sup |f_t|
  scalar_t value_bound_g = 0.0;    // sup |g_t|
};

LinearInstance make_linear_instance(SetKind kind, int dimension,
                                    std::uint64_t seed, scalar_t beta);

struct LinearRound {
  vector_t cost;        // a_t
  vector_t constraint;  // b_t
  scalar_t offset;      // c_t
};

LinearRound perturb_linear_round(const LinearInstance& inst, Rng& rng);
FirstOrderFeedback linear_round_functions(const LinearRound& lr,
                                          const vector_t& x);

/** Experiment configuration; JSON fields {policy, T, seed, nodes, edges,
 *  beta, set_kind, timing, sample_paths, sweep{T_list, seeds}}, unknown
 *  fields rejected. */
struct SweepConfig {
  std::vector<int> T_list;
  std::vector<std::uint64_t> seeds;
};

struct ExperimentConfig {
  std::string policy = "coco";  // coco | bandit-cbco | baseline-projected
  int T = 1600;
  std::uint64_t seed = 1;
  int nodes = 12;
  int edges = 24;
  scalar_t beta = 0.9;
  std::string set_kind = "flow";  // flow | ball | box | simplex
  bool timing = false;        // off by default so traces are byte-identical
  bool sample_paths = false;  // flow only: log a sampled route's cost
  SweepConfig sweep;
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/** One finished run: the full CSV trace (header included) plus the summary
 *  fields and the runtime assertions collected along the way. */
struct RunResult {
  std::string trace_csv;
  int T = 0;
  std::uint64_t seed = 0;
  scalar_t final_regret = 0.0;
  scalar_t final_ccv = 0.0;
  std::uint64_t total_runtime_ns = 0;
  std::uint64_t oracle_calls = 0;  // LP calls made during the round loop
  scalar_t max_lemma3_ratio = 1.0;
  scalar_t lemma4_log_ratio = 0.0;
  scalar_t lemma4_bound = 0.0;
  scalar_t max_round_violation = 0.0;
  scalar_t violation_budget = 0.0;  // G * D
  bool comparator_planted = false;
};

RunResult run_experiment(const ExperimentConfig& config);

/** Runs the T_list x seeds grid (in parallel up to `threads`), writes one
 *  trace per run plus summary.csv into out_dir, rows in run-id order. */
struct SweepResult {
  std::vector<RunResult> runs;  // row order of summary.csv
  std::string summary_csv;
};

SweepResult run_sweep(const ExperimentConfig& config, const std::string& out_dir,
                      int threads);

/** Least-squares slope of ln(y) against ln(x); the sublinearity checks. */
scalar_t loglog_slope(const std::vector<scalar_t>& x,
                      const std::vector<scalar_t>& y);

}  // namespace cocokit::bench
