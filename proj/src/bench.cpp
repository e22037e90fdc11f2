#include "cocokit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cocokit/bandit.hpp"
#include "cocokit/baselines.hpp"
#include "cocokit/coco.hpp"
#include "cocokit/flow.hpp"

namespace cocokit::bench {

namespace {

std::string fmt(scalar_t v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr const char* kTraceHeader =
    "policy,t,f_val,g_val,Q,lambda,sigma,eta_scaled,cum_regret,ccv,"
    "oracle_ns,block,inner_cg_iters,gap_at_exit,oracle_calls_cum,realized_f";

}  // namespace

NetworkInstance generate_network(std::uint64_t seed, int nodes,
                                 int extra_edges) {
  if (nodes < 3) throw std::invalid_argument("generate_network: nodes < 3");
  const std::size_t non_hub = static_cast<std::size_t>(nodes) - 1;
  if (extra_edges < 0 ||
      static_cast<std::size_t>(extra_edges) > non_hub * (non_hub - 1) / 2) {
    throw std::invalid_argument("generate_network: extra_edges out of range");
  }
  Rng rng(seed);

  // Per-node hub measurements.
  std::vector<scalar_t> hub_latency(nodes), node_bandwidth(nodes);
  for (int v = 0; v < nodes; ++v) {
    hub_latency[v] = rng.uniform(1.0, 10.0);
    node_bandwidth[v] = rng.uniform(20.0, 100.0);
  }

  // Random topological order; all edges point forward along it.
  std::vector<int> order(nodes);
  for (int v = 0; v < nodes; ++v) order[v] = v;
  for (int i = nodes - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<int> position(nodes);
  for (int i = 0; i < nodes; ++i) position[order[i]] = i;

  const int source = order.front();
  const int sink = order.back();
  const int hub = order[nodes / 2];

  std::vector<std::pair<int, int>> edges;
  std::vector<scalar_t> latency, bandwidth;
  auto add_edge = [&](int a, int b, scalar_t lat, scalar_t bw) {
    if (position[a] > position[b]) std::swap(a, b);
    edges.emplace_back(a, b);
    latency.push_back(lat);
    bandwidth.push_back(bw);
  };

  for (int v = 0; v < nodes; ++v) {
    if (v == hub) continue;
    add_edge(v, hub, hub_latency[v], node_bandwidth[v]);
  }

  std::set<std::pair<int, int>> used;
  int added = 0;
  while (added < extra_edges) {
    const int a = static_cast<int>(rng.next_u64() % nodes);
    const int b = static_cast<int>(rng.next_u64() % nodes);
    if (a == b || a == hub || b == hub) continue;
    const auto key = std::minmax(a, b);
    if (!used.insert(key).second) continue;
    add_edge(a, b, hub_latency[a] + hub_latency[b],
             std::min(node_bandwidth[a], node_bandwidth[b]));
    added += 1;
  }

  NetworkInstance inst;
  inst.dag = make_dag(nodes, edges);
  inst.source = source;
  inst.sink = sink;
  inst.base_latency =
      Eigen::Map<const vector_t>(latency.data(), latency.size());
  inst.base_bandwidth =
      Eigen::Map<const vector_t>(bandwidth.data(), bandwidth.size());

  // Plant the source-hub-sink route: boosted bandwidth, trimmed latency, so
  // a route that is feasible in every round exists and coincides with the
  // mean-latency optimum.
  const scalar_t max_bw =
      *std::max_element(bandwidth.begin(), bandwidth.end());
  const scalar_t min_lat =
      *std::min_element(hub_latency.begin(), hub_latency.end());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const bool on_planted =
        (edges[e].first == source && edges[e].second == hub) ||
        (edges[e].first == hub && edges[e].second == sink);
    if (on_planted) {
      inst.planted_path.push_back(static_cast<int>(e));
      inst.base_bandwidth[static_cast<index_t>(e)] = 1.25 * max_bw;
      inst.base_latency[static_cast<index_t>(e)] = 0.5 * min_lat;
    }
  }
  return inst;
}

RoundData perturb_round(const NetworkInstance& inst, Rng& rng, scalar_t beta) {
  if (beta <= 0.0 || beta > 1.0) {
    throw std::invalid_argument("perturb_round: beta must be in (0, 1]");
  }
  const index_t edge_count = inst.base_latency.size();
  RoundData rd;
  rd.latency.resize(edge_count);
  rd.bandwidth.resize(edge_count);
  for (index_t e = 0; e < edge_count; ++e) {
    rd.latency[e] = inst.base_latency[e] * rng.uniform(0.5, 1.5);
    rd.bandwidth[e] = inst.base_bandwidth[e] * rng.uniform(0.8, 1.2);
  }
  scalar_t planted_bw = 0.0;
  for (int e : inst.planted_path) planted_bw += rd.bandwidth[e];
  rd.threshold = beta * planted_bw;
  return rd;
}

FirstOrderFeedback round_functions(const RoundData& rd, const vector_t& x) {
  FirstOrderFeedback fb;
  fb.f_value = rd.latency.dot(x);
  fb.f_grad = rd.latency;
  fb.g_value = rd.threshold - rd.bandwidth.dot(x);
  fb.g_grad = -rd.bandwidth;
  return fb;
}

namespace {

// DFS enumeration of all s-d paths in edge-index order; stops early once the
// count exceeds the cap.
bool enumerate_paths(const Dag& dag, int s, int d, std::size_t max_paths,
                     std::vector<std::vector<int>>& out_paths) {
  std::vector<std::vector<int>> out(dag.node_count);
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    out[dag.edges[e].first].push_back(static_cast<int>(e));
  }
  std::vector<int> path;
  std::function<bool(int)> dfs = [&](int v) -> bool {
    if (v == d) {
      if (out_paths.size() >= max_paths) return false;
      out_paths.push_back(path);
      return true;
    }
    for (int e : out[v]) {
      path.push_back(e);
      const bool ok = dfs(dag.edges[e].second);
      path.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return dfs(s);
}

}  // namespace

Comparator hindsight_comparator(const NetworkInstance& inst,
                                const std::vector<RoundData>& rounds,
                                std::size_t max_paths) {
  Comparator comp;
  std::vector<std::vector<int>> paths;
  if (!enumerate_paths(inst.dag, inst.source, inst.sink, max_paths, paths)) {
    comp.planted_fallback = true;
    comp.path = inst.planted_path;
    comp.x_star = path_incidence(inst.dag, comp.path);
    comp.cum_cost = 0.0;
    for (const auto& rd : rounds) comp.cum_cost += rd.latency.dot(comp.x_star);
    return comp;
  }

  vector_t cum_latency = vector_t::Zero(inst.base_latency.size());
  for (const auto& rd : rounds) cum_latency += rd.latency;

  bool found = false;
  scalar_t best_cost = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool feasible = true;
    for (const auto& rd : rounds) {
      scalar_t bw = 0.0;
      for (int e : paths[i]) bw += rd.bandwidth[e];
      if (rd.threshold - bw > 0.0) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    scalar_t cost = 0.0;
    for (int e : paths[i]) cost += cum_latency[e];
    if (!found || cost < best_cost) {
      found = true;
      best_cost = cost;
      best_index = i;
    }
  }
  if (!found) {
    throw std::runtime_error(
        "hindsight_comparator: no route feasible in every round");
  }
  comp.path = paths[best_index];
  comp.x_star = path_incidence(inst.dag, comp.path);
  comp.cum_cost = best_cost;
  return comp;
}

LinearInstance make_linear_instance(SetKind kind, int dimension,
                                    std::uint64_t seed, scalar_t beta) {
  if (dimension < 2) {
    throw std::invalid_argument("make_linear_instance: dimension < 2");
  }
  if (beta <= 0.0 || beta > 1.0) {
    throw std::invalid_argument("make_linear_instance: beta must be in (0,1]");
  }
  Rng rng(seed);
  auto random_unit = [&]() {
    vector_t v(dimension);
    for (index_t i = 0; i < dimension; ++i) v[i] = rng.uniform(-1.0, 1.0);
    const scalar_t norm = v.norm();
    return norm > 1e-9 ? vector_t(v / norm) : vector_t::Unit(dimension, 0);
  };

  LinearInstance inst;
  inst.cost_base = random_unit();
  inst.constraint_base = random_unit();
  inst.margin = std::max(0.05, 1.0 - beta);
  inst.noise = 0.25;

  switch (kind) {
    case SetKind::Ball:
      inst.set = make_ball(vector_t::Zero(dimension), 1.0);
      inst.planted = -inst.cost_base;
      break;
    case SetKind::Box:
      inst.set = make_box(vector_t::Constant(dimension, -1.0),
                          vector_t::Constant(dimension, 1.0));
      inst.planted = vector_t(dimension);
      for (index_t i = 0; i < dimension; ++i) {
        inst.planted[i] = inst.cost_base[i] > 0.0 ? -1.0 : 1.0;
      }
      break;
    case SetKind::Simplex: {
      inst.set = make_simplex(dimension, 1.0);
      index_t best = 0;
      for (index_t i = 1; i < dimension; ++i) {
        if (inst.cost_base[i] < inst.cost_base[best]) best = i;
      }
      inst.planted = vector_t::Zero(dimension);
      inst.planted[best] = 1.0;
      break;
    }
    case SetKind::FlowPolytope:
      throw std::invalid_argument(
          "make_linear_instance: use generate_network for the flow polytope");
  }

  const scalar_t dim_scale = std::sqrt(static_cast<scalar_t>(dimension));
  inst.lipschitz_bound = 1.0 + inst.noise * dim_scale;
  const scalar_t radius = inst.set.outer_radius;
  inst.value_bound_f = inst.lipschitz_bound * radius;
  inst.value_bound_g = 2.0 * inst.lipschitz_bound * radius + inst.margin;
  return inst;
}

LinearRound perturb_linear_round(const LinearInstance& inst, Rng& rng) {
  const index_t n = inst.cost_base.size();
  LinearRound lr;
  lr.cost.resize(n);
  lr.constraint.resize(n);
  for (index_t i = 0; i < n; ++i) {
    lr.cost[i] = inst.cost_base[i] + inst.noise * rng.uniform(-1.0, 1.0);
  }
  for (index_t i = 0; i < n; ++i) {
    lr.constraint[i] =
        inst.constraint_base[i] + inst.noise * rng.uniform(-1.0, 1.0);
  }
  lr.offset = -lr.constraint.dot(inst.planted) - inst.margin;
  return lr;
}

FirstOrderFeedback linear_round_functions(const LinearRound& lr,
                                          const vector_t& x) {
  FirstOrderFeedback fb;
  fb.f_value = lr.cost.dot(x);
  fb.f_grad = lr.cost;
  fb.g_value = lr.constraint.dot(x) + lr.offset;
  fb.g_grad = lr.constraint;
  return fb;
}

namespace {

SetKind parse_set_kind(const std::string& name) {
  if (name == "flow") return SetKind::FlowPolytope;
  if (name == "ball") return SetKind::Ball;
  if (name == "box") return SetKind::Box;
  if (name == "simplex") return SetKind::Simplex;
  throw std::invalid_argument("config: unknown set_kind '" + name + "'");
}

void validate(const ExperimentConfig& config) {
  if (config.policy != "coco" && config.policy != "bandit-cbco" &&
      config.policy != "baseline-projected") {
    throw std::invalid_argument("config: unknown policy '" + config.policy +
                                "'");
  }
  if (config.T < 8) throw std::invalid_argument("config: T must be >= 8");
  const SetKind kind = parse_set_kind(config.set_kind);
  if (config.policy == "baseline-projected" &&
      kind == SetKind::FlowPolytope) {
    throw std::invalid_argument(
        "config: the projected baseline has no closed-form projection on the "
        "flow polytope");
  }
  if (config.policy == "bandit-cbco" &&
      (kind == SetKind::FlowPolytope || kind == SetKind::Simplex)) {
    throw std::invalid_argument(
        "config: bandit mode needs an origin-centered full-dimensional set "
        "(ball or box)");
  }
  if (kind == SetKind::FlowPolytope) {
    if (config.nodes < 3) throw std::invalid_argument("config: nodes < 3");
    if (config.edges < config.nodes - 1) {
      throw std::invalid_argument("config: edges < nodes - 1");
    }
  } else if (config.nodes < 2) {
    throw std::invalid_argument("config: dimension (nodes) < 2");
  }
  if (config.beta <= 0.0 || config.beta > 1.0) {
    throw std::invalid_argument("config: beta must be in (0, 1]");
  }
  if (config.sample_paths && kind != SetKind::FlowPolytope) {
    throw std::invalid_argument("config: sample_paths needs set_kind flow");
  }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                err.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "policy") {
      config.policy = value.get<std::string>();
    } else if (key == "T") {
      config.T = value.get<int>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else if (key == "nodes") {
      config.nodes = value.get<int>();
    } else if (key == "edges") {
      config.edges = value.get<int>();
    } else if (key == "beta") {
      config.beta = value.get<scalar_t>();
    } else if (key == "set_kind") {
      config.set_kind = value.get<std::string>();
    } else if (key == "timing") {
      config.timing = value.get<bool>();
    } else if (key == "sample_paths") {
      config.sample_paths = value.get<bool>();
    } else if (key == "sweep") {
      if (!value.is_object()) {
        throw std::invalid_argument("config: sweep must be an object");
      }
      for (const auto& [skey, svalue] : value.items()) {
        if (skey == "T_list") {
          config.sweep.T_list = svalue.get<std::vector<int>>();
        } else if (skey == "seeds") {
          config.sweep.seeds = svalue.get<std::vector<std::uint64_t>>();
        } else {
          throw std::invalid_argument("config: unknown sweep field '" + skey +
                                      "'");
        }
      }
    } else {
      throw std::invalid_argument("config: unknown field '" + key + "'");
    }
  }
  validate(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

namespace {

struct RowScratch {
  std::string policy;
  int t = 0;
  scalar_t f_val = 0.0, g_val = 0.0, queue = 0.0, lambda = 0.0;
  std::optional<scalar_t> sigma, eta, gap, realized_f;
  std::optional<int> block, cg_iters;
  scalar_t cum_regret = 0.0, ccv = 0.0;
  std::uint64_t oracle_ns = 0, oracle_calls_cum = 0;
};

void append_row(std::string& csv, const RowScratch& row) {
  csv += row.policy;
  csv += ',';
  csv += std::to_string(row.t);
  csv += ',';
  csv += fmt(row.f_val);
  csv += ',';
  csv += fmt(row.g_val);
  csv += ',';
  csv += fmt(row.queue);
  csv += ',';
  csv += fmt(row.lambda);
  csv += ',';
  if (row.sigma) csv += fmt(*row.sigma);
  csv += ',';
  if (row.eta) csv += fmt(*row.eta);
  csv += ',';
  csv += fmt(row.cum_regret);
  csv += ',';
  csv += fmt(row.ccv);
  csv += ',';
  csv += std::to_string(row.oracle_ns);
  csv += ',';
  if (row.block) csv += std::to_string(*row.block);
  csv += ',';
  if (row.cg_iters) csv += std::to_string(*row.cg_iters);
  csv += ',';
  if (row.gap) csv += fmt(*row.gap);
  csv += ',';
  csv += std::to_string(row.oracle_calls_cum);
  csv += ',';
  if (row.realized_f) csv += fmt(*row.realized_f);
  csv += '\n';
}

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point from) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - from)
          .count());
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const SetKind kind = parse_set_kind(config.set_kind);
  const auto run_start = Clock::now();

  Rng master(config.seed);
  Rng rounds_rng = master.split(1);
  Rng policy_rng = master.split(2);

  RunResult result;
  result.T = config.T;
  result.seed = config.seed;

  // Instance, decision set, analytic Lipschitz bound, per-round feedback.
  NetworkInstance network;
  LinearInstance linear;
  DecisionSet flow_set;
  const DecisionSet* set = nullptr;
  std::vector<RoundData> net_rounds;
  std::vector<LinearRound> lin_rounds;
  vector_t comparator_point;
  std::vector<scalar_t> comparator_cost(config.T);
  scalar_t lipschitz_bound = 0.0;
  scalar_t value_bound_f = 0.0, value_bound_g = 0.0;

  if (kind == SetKind::FlowPolytope) {
    network = generate_network(config.seed, config.nodes,
                               config.edges - (config.nodes - 1));
    flow_set =
        make_flow_polytope(network.dag, network.source, network.sink);
    set = &flow_set;
    net_rounds.reserve(config.T);
    for (int t = 0; t < config.T; ++t) {
      net_rounds.push_back(perturb_round(network, rounds_rng, config.beta));
    }
    const Comparator comp = hindsight_comparator(network, net_rounds);
    result.comparator_planted = comp.planted_fallback;
    comparator_point = comp.x_star;
    for (int t = 0; t < config.T; ++t) {
      comparator_cost[t] = net_rounds[t].latency.dot(comparator_point);
    }
    lipschitz_bound = std::max(1.5 * network.base_latency.norm(),
                               1.2 * network.base_bandwidth.norm());
  } else {
    linear = make_linear_instance(kind, config.nodes, config.seed, config.beta);
    set = &linear.set;
    lin_rounds.reserve(config.T);
    for (int t = 0; t < config.T; ++t) {
      lin_rounds.push_back(perturb_linear_round(linear, rounds_rng));
    }
    result.comparator_planted = true;
    comparator_point = linear.planted;
    for (int t = 0; t < config.T; ++t) {
      comparator_cost[t] = lin_rounds[t].cost.dot(comparator_point);
    }
    lipschitz_bound = linear.lipschitz_bound;
    value_bound_f = linear.value_bound_f;
    value_bound_g = linear.value_bound_g;
  }

  auto feedback_at = [&](int t, const vector_t& x) {
    return kind == SetKind::FlowPolytope
               ? round_functions(net_rounds[t - 1], x)
               : linear_round_functions(lin_rounds[t - 1], x);
  };

  result.violation_budget = lipschitz_bound * set->diameter;

  std::string csv = kTraceHeader;
  csv += '\n';
  GameMetrics metrics;
  std::uint64_t lp_calls_baseline = 0;

  const CocoParams params = coco_params(config.T, lipschitz_bound,
                                        set->diameter);
  result.lemma4_bound = params.m * params.m;

  if (config.policy == "coco") {
    CocoState state = coco_init(params, *set);
    lp_calls_baseline = set->lp_calls;  // init call excluded from the count
    for (int t = 1; t <= config.T; ++t) {
      const vector_t x = state.ocg.x_current;
      const FirstOrderFeedback fb = feedback_at(t, x);
      metrics = update_metrics(metrics, fb.f_value, comparator_cost[t - 1],
                               fb.g_value);
      result.max_round_violation =
          std::max(result.max_round_violation, positive_part(fb.g_value));

      std::optional<scalar_t> realized;
      if (config.sample_paths) {
        const auto dec =
            flow_decompose(network.dag, x, network.source, network.sink);
        const auto& sampled = sample_path(dec, policy_rng);
        scalar_t cost = 0.0;
        for (int e : sampled) cost += net_rounds[t - 1].latency[e];
        realized = cost;
      }

      const auto step_start = Clock::now();
      coco_step(state, fb);
      const std::uint64_t step_ns = config.timing ? elapsed_ns(step_start) : 0;

      RowScratch row;
      row.policy = config.policy;
      row.t = t;
      row.f_val = fb.f_value;
      row.g_val = fb.g_value;
      row.queue = state.queue;
      row.lambda = state.lambda_last;
      row.sigma = state.ocg.sigma_last;
      row.eta = state.ocg.eta_current;
      row.cum_regret = metrics.regret();
      row.ccv = metrics.ccv;
      row.oracle_ns = step_ns;
      row.oracle_calls_cum = set->lp_calls - lp_calls_baseline;
      row.realized_f = realized;
      append_row(csv, row);
    }
    result.max_lemma3_ratio = state.max_lemma3_ratio;
    result.lemma4_log_ratio =
        lemma4_log_ratio(params, state.queue_after_first, state.queue);
  } else if (config.policy == "baseline-projected") {
    ProjectedState state = projected_init(*set);
    lp_calls_baseline = set->lp_calls;
    scalar_t queue = params.Q0;
    scalar_t queue_first = params.Q0;
    scalar_t max_ratio = 1.0;
    scalar_t lambda_last = 0.0;
    scalar_t eta_last = 0.0;
    for (int t = 1; t <= config.T; ++t) {
      const vector_t x = state.x_current;
      const FirstOrderFeedback fb = feedback_at(t, x);
      metrics = update_metrics(metrics, fb.f_value, comparator_cost[t - 1],
                               fb.g_value);
      result.max_round_violation =
          std::max(result.max_round_violation, positive_part(fb.g_value));

      const auto step_start = Clock::now();
      const scalar_t queue_prev = queue;
      queue += positive_part(fb.g_value);
      if (t == 1) queue_first = queue;
      max_ratio = std::max(max_ratio, lemma3_ratio(params, queue_prev, queue));
      const SurrogateGradient sg = surrogate_gradient(params, queue, fb);
      lambda_last = sg.lambda;
      projected_step(state, sg.grad);
      eta_last = state.sq_grad_sum > 0.0
                     ? set->diameter / std::sqrt(2.0 * state.sq_grad_sum)
                     : 0.0;
      const std::uint64_t step_ns = config.timing ? elapsed_ns(step_start) : 0;

      RowScratch row;
      row.policy = config.policy;
      row.t = t;
      row.f_val = fb.f_value;
      row.g_val = fb.g_value;
      row.queue = queue;
      row.lambda = lambda_last;
      row.eta = eta_last;
      row.cum_regret = metrics.regret();
      row.ccv = metrics.ccv;
      row.oracle_ns = step_ns;
      row.oracle_calls_cum = set->lp_calls - lp_calls_baseline;
      append_row(csv, row);
    }
    result.max_lemma3_ratio = max_ratio;
    result.lemma4_log_ratio = lemma4_log_ratio(params, queue_first, queue);
  } else {  // bandit-cbco
    CbcoState state = cbco_init(config.T, lipschitz_bound, *set,
                                value_bound_f, value_bound_g,
                                policy_rng.split(1));
    lp_calls_baseline = set->lp_calls;
    scalar_t queue_first = state.params.Q0;
    scalar_t max_ratio = 1.0;
    for (int t = 1; t <= config.T; ++t) {
      const vector_t y = cbco_play(state);
      const FirstOrderFeedback full = feedback_at(t, y);
      const BanditFeedback fb{full.f_value, full.g_value};
      metrics = update_metrics(metrics, fb.f_value, comparator_cost[t - 1],
                               fb.g_value);
      result.max_round_violation =
          std::max(result.max_round_violation, positive_part(fb.g_value));

      const auto step_start = Clock::now();
      const scalar_t queue_prev = state.queue;
      const int block_before = state.inner.block;
      cbco_step(state, fb);
      if (t == 1) queue_first = state.queue;
      max_ratio = std::max(
          max_ratio, lemma3_ratio(state.params, queue_prev, state.queue));
      const std::uint64_t step_ns = config.timing ? elapsed_ns(step_start) : 0;
      const bool block_closed = state.inner.block != block_before;

      RowScratch row;
      row.policy = config.policy;
      row.t = t;
      row.f_val = fb.f_value;
      row.g_val = fb.g_value;
      row.queue = state.queue;
      row.lambda = state.lambda_hat_last;
      if (state.inner.eta_last > 0.0) row.eta = state.inner.eta_last;
      row.cum_regret = metrics.regret();
      row.ccv = metrics.ccv;
      row.oracle_ns = step_ns;
      row.block = block_before;
      if (block_closed) {
        row.cg_iters = state.inner.last_cg_iters;
        row.gap = state.inner.last_cg_gap;
      }
      row.oracle_calls_cum = set->lp_calls - lp_calls_baseline;
      append_row(csv, row);
    }
    result.max_lemma3_ratio = max_ratio;
    result.lemma4_log_ratio =
        lemma4_log_ratio(state.params, queue_first, state.queue);
  }

  result.trace_csv = std::move(csv);
  result.final_regret = metrics.regret();
  result.final_ccv = metrics.ccv;
  result.oracle_calls = set->lp_calls - lp_calls_baseline;
  result.total_runtime_ns = elapsed_ns(run_start);
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config,
                      const std::string& out_dir, int threads) {
  if (config.sweep.T_list.empty() || config.sweep.seeds.empty()) {
    throw std::invalid_argument("run_sweep: sweep.T_list and sweep.seeds "
                                "must be non-empty");
  }
  std::filesystem::create_directories(out_dir);

  struct Job {
    int T;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int T : config.sweep.T_list) {
    for (std::uint64_t seed : config.sweep.seeds) jobs.push_back({T, seed});
  }

  SweepResult sweep;
  sweep.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        ExperimentConfig run_config = config;
        run_config.T = jobs[i].T;
        run_config.seed = jobs[i].seed;
        run_config.sweep = {};
        sweep.runs[i] = run_experiment(run_config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int worker_count =
      std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  if (first_error) std::rethrow_exception(first_error);

  std::string summary = "T,seed,final_regret,final_ccv,total_runtime_ns,"
                        "oracle_calls\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RunResult& run = sweep.runs[i];
    const std::string name = "trace_T" + std::to_string(run.T) + "_seed" +
                             std::to_string(run.seed) + ".csv";
    std::ofstream trace(std::filesystem::path(out_dir) / name,
                        std::ios::binary);
    trace << run.trace_csv;

    summary += std::to_string(run.T);
    summary += ',';
    summary += std::to_string(run.seed);
    summary += ',';
    summary += fmt(run.final_regret);
    summary += ',';
    summary += fmt(run.final_ccv);
    summary += ',';
    summary += std::to_string(run.total_runtime_ns);
    summary += ',';
    summary += std::to_string(run.oracle_calls);
    summary += '\n';
  }
  std::ofstream out(std::filesystem::path(out_dir) / "summary.csv",
                    std::ios::binary);
  out << summary;
  sweep.summary_csv = std::move(summary);
  return sweep;
}

scalar_t loglog_slope(const std::vector<scalar_t>& x,
                      const std::vector<scalar_t>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 points");
  }
  scalar_t sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto count = static_cast<scalar_t>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw std::invalid_argument("loglog_slope: non-positive sample");
    }
    const scalar_t lx = std::log(x[i]);
    const scalar_t ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace cocokit::bench
