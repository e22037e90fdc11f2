#include "cocokit/dag.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cocokit {

Dag make_dag(int node_count, std::vector<std::pair<int, int>> edges) {
  if (node_count < 1) throw std::invalid_argument("make_dag: node_count < 1");
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= node_count || to < 0 || to >= node_count) {
      throw std::invalid_argument("make_dag: edge endpoint out of range");
    }
    if (from == to) throw std::invalid_argument("make_dag: self-loop");
  }

  // Kahn's algorithm, smallest node id first so the order is deterministic.
  std::vector<int> indegree(node_count, 0);
  std::vector<std::vector<int>> out(node_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out[edges[e].first].push_back(edges[e].second);
    indegree[edges[e].second] += 1;
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < node_count; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(node_count);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : out[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (static_cast<int>(order.size()) != node_count) {
    throw std::invalid_argument("make_dag: edge list contains a cycle");
  }

  Dag dag;
  dag.node_count = node_count;
  dag.edges = std::move(edges);
  dag.topo_order = std::move(order);
  return dag;
}

std::vector<int> dag_shortest_path(const Dag& dag, const vector_t& weights,
                                   int s, int d) {
  const int n = dag.node_count;
  const auto edge_count = static_cast<index_t>(dag.edges.size());
  if (weights.size() != edge_count) {
    throw std::invalid_argument("dag_shortest_path: weight length mismatch");
  }
  if (!weights.allFinite()) {
    throw std::invalid_argument("dag_shortest_path: non-finite weight");
  }
  if (s < 0 || s >= n || d < 0 || d >= n) {
    throw std::invalid_argument("dag_shortest_path: endpoint out of range");
  }

  // Outgoing edge lists in increasing edge-index order.
  std::vector<std::vector<int>> out(n);
  for (int e = 0; e < edge_count; ++e) out[dag.edges[e].first].push_back(e);

  constexpr scalar_t kInf = std::numeric_limits<scalar_t>::infinity();
  std::vector<scalar_t> dist(n, kInf);
  std::vector<int> pred(n, -1);
  dist[s] = 0.0;
  for (int u : dag.topo_order) {
    if (dist[u] == kInf) continue;
    for (int e : out[u]) {
      const int v = dag.edges[e].second;
      const scalar_t cand = dist[u] + weights[e];
      if (cand < dist[v]) {
        dist[v] = cand;
        pred[v] = e;
      } else if (cand == dist[v] && pred[v] >= 0 && e < pred[v]) {
        pred[v] = e;
      }
    }
  }
  if (dist[d] == kInf) {
    throw std::runtime_error("dag_shortest_path: no path from s to d");
  }

  std::vector<int> path;
  for (int v = d; v != s;) {
    const int e = pred[v];
    path.push_back(e);
    v = dag.edges[e].first;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool dag_has_path(const Dag& dag, int s, int d) {
  if (s == d) return true;
  std::vector<std::vector<int>> out(dag.node_count);
  for (const auto& [from, to] : dag.edges) out[from].push_back(to);
  std::vector<char> seen(dag.node_count, 0);
  std::vector<int> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : out[v]) {
      if (w == d) return true;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

vector_t path_incidence(const Dag& dag, const std::vector<int>& path_edges) {
  vector_t x = vector_t::Zero(static_cast<index_t>(dag.edges.size()));
  for (int e : path_edges) x[e] = 1.0;
  return x;
}

void write_dag(std::ostream& out, const Dag& dag, int source, int sink) {
  out << "nodes " << dag.node_count << " source " << source << " sink "
      << sink << "\n";
  for (const auto& [from, to] : dag.edges) out << from << " " << to << "\n";
}

DagFile read_dag(std::istream& in) {
  std::string tok_nodes, tok_source, tok_sink;
  int n = 0, s = 0, d = 0;
  if (!(in >> tok_nodes >> n >> tok_source >> s >> tok_sink >> d) ||
      tok_nodes != "nodes" || tok_source != "source" || tok_sink != "sink") {
    throw std::invalid_argument("read_dag: malformed header");
  }
  std::vector<std::pair<int, int>> edges;
  int from = 0, to = 0;
  while (in >> from >> to) edges.emplace_back(from, to);
  DagFile file;
  file.dag = make_dag(n, std::move(edges));
  file.source = s;
  file.sink = d;
  return file;
}

}  // namespace cocokit
