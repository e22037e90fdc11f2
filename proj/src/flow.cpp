#include "cocokit/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace cocokit {

namespace {

constexpr scalar_t kConservationTol = 1e-7;
constexpr scalar_t kResidualFloor = 1e-12;

}  // namespace

PathDecomposition flow_decompose(const Dag& dag, const vector_t& flow, int s,
                                 int d) {
  const auto edge_count = static_cast<index_t>(dag.edges.size());
  if (flow.size() != edge_count) {
    throw std::invalid_argument("flow_decompose: flow length mismatch");
  }
  if (!flow.allFinite() || flow.minCoeff() < -kConservationTol ||
      flow.maxCoeff() > 1.0 + kConservationTol) {
    throw std::invalid_argument("flow_decompose: edge value outside [0,1]");
  }

  vector_t net = vector_t::Zero(dag.node_count);
  for (index_t e = 0; e < edge_count; ++e) {
    net[dag.edges[static_cast<std::size_t>(e)].first] += flow[e];
    net[dag.edges[static_cast<std::size_t>(e)].second] -= flow[e];
  }
  for (int v = 0; v < dag.node_count; ++v) {
    scalar_t want = 0.0;
    if (v == s) want = 1.0;
    if (v == d) want = -1.0;
    if (std::abs(net[v] - want) > kConservationTol) {
      throw std::invalid_argument("flow_decompose: conservation violated");
    }
  }

  std::vector<std::vector<int>> out(dag.node_count);
  for (index_t e = 0; e < edge_count; ++e) {
    out[dag.edges[static_cast<std::size_t>(e)].first].push_back(
        static_cast<int>(e));
  }

  vector_t residual = flow;
  PathDecomposition dec;
  for (index_t iter = 0; iter < edge_count; ++iter) {
    // Max-residual outgoing edge at s starts a new path; smallest edge index
    // wins ties so the decomposition is deterministic.
    std::vector<int> path;
    int v = s;
    while (v != d) {
      int best = -1;
      for (int e : out[v]) {
        if (residual[e] > kResidualFloor &&
            (best < 0 || residual[e] > residual[best])) {
          best = e;
        }
      }
      if (best < 0) {
        if (v == s) break;  // flow exhausted
        throw std::invalid_argument(
            "flow_decompose: stuck mid-trace; conservation violated");
      }
      path.push_back(best);
      v = dag.edges[static_cast<std::size_t>(best)].second;
    }
    if (path.empty()) break;

    scalar_t bottleneck = residual[path.front()];
    for (int e : path) bottleneck = std::min(bottleneck, residual[e]);
    for (int e : path) residual[e] -= bottleneck;
    dec.entries.push_back({std::move(path), bottleneck});
  }
  return dec;
}

const std::vector<int>& sample_path(const PathDecomposition& dec, Rng& rng) {
  if (dec.entries.empty()) {
    throw std::invalid_argument("sample_path: empty decomposition");
  }
  const scalar_t u = rng.uniform();
  scalar_t cumulative = 0.0;
  for (const auto& entry : dec.entries) {
    cumulative += entry.weight;
    if (u < cumulative) return entry.path;
  }
  return dec.entries.back().path;
}

}  // namespace cocokit
