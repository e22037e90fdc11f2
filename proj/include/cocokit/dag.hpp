#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "cocokit/types.hpp"

namespace cocokit {

/** Directed acyclic graph over nodes 0..node_count-1. The stored topological
 *  order doubles as the acyclicity certificate. Edge order is significant:
 *  flows, weights and incidence vectors are indexed by position in `edges`. */
struct Dag {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // (from, to)
  std::vector<int> topo_order;
};

/** Builds a Dag and its topological order; throws std::invalid_argument on a
 *  cycle, an out-of-range endpoint, or a self-loop. */
Dag make_dag(int node_count, std::vector<std::pair<int, int>> edges);

/** Minimum-total-weight s-d path as a list of edge indices. Weights may be
 *  negative; the path is computed by dynamic programming in topological
 *  order, ties broken by the smallest predecessor edge index. Throws
 *  std::runtime_error when d is unreachable from s. */
std::vector<int> dag_shortest_path(const Dag& dag, const vector_t& weights,
                                   int s, int d);

/** True iff at least one s-d path exists. */
bool dag_has_path(const Dag& dag, int s, int d);

/** 0/1 incidence vector (length |E|) of a path given as edge indices. */
vector_t path_incidence(const Dag& dag, const std::vector<int>& path_edges);

/** Edge-list text format: header `nodes <n> source <s> sink <d>`, then one
 *  `from to` pair per line. */
struct DagFile {
  Dag dag;
  int source = 0;
  int sink = 0;
};

void write_dag(std::ostream& out, const Dag& dag, int source, int sink);
DagFile read_dag(std::istream& in);

}  // namespace cocokit
