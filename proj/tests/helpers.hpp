#pragma once

// Test-side oracles, deliberately independent of the library code paths they
// check: exhaustive path enumeration, grid minimizers, random members of the
// built-in decision sets.

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "cocokit/dag.hpp"
#include "cocokit/decision_set.hpp"
#include "cocokit/rng.hpp"
#include "cocokit/types.hpp"

namespace cocokit::testing {

inline std::vector<std::vector<int>> all_paths(const Dag& dag, int s, int d) {
  std::vector<std::vector<int>> out_edges(dag.node_count);
  for (std::size_t e = 0; e < dag.edges.size(); ++e) {
    out_edges[dag.edges[e].first].push_back(static_cast<int>(e));
  }
  std::vector<std::vector<int>> paths;
  std::vector<int> current;
  std::function<void(int)> dfs = [&](int v) {
    if (v == d) {
      paths.push_back(current);
      return;
    }
    for (int e : out_edges[v]) {
      current.push_back(e);
      dfs(dag.edges[e].second);
      current.pop_back();
    }
  };
  dfs(s);
  return paths;
}

inline scalar_t path_weight(const std::vector<int>& path,
                            const vector_t& weights) {
  scalar_t total = 0.0;
  for (int e : path) total += weights[e];  // same fold order as the DP
  return total;
}

// Exhaustive shortest path with the library's declared tie-break: among
// minimum-weight paths, the one whose edge-index sequence read from the sink
// backwards is lexicographically smallest.
inline std::pair<std::vector<int>, scalar_t> brute_shortest_path(
    const Dag& dag, const vector_t& weights, int s, int d) {
  const auto paths = all_paths(dag, s, d);
  if (paths.empty()) throw std::runtime_error("brute_shortest_path: no path");
  scalar_t best = std::numeric_limits<scalar_t>::infinity();
  for (const auto& p : paths) best = std::min(best, path_weight(p, weights));

  const std::vector<int>* chosen = nullptr;
  std::vector<int> chosen_rev;
  for (const auto& p : paths) {
    if (path_weight(p, weights) != best) continue;
    std::vector<int> rev(p.rbegin(), p.rend());
    if (chosen == nullptr || rev < chosen_rev) {
      chosen = &p;
      chosen_rev = std::move(rev);
    }
  }
  return {*chosen, best};
}

struct RandomDag {
  Dag dag;
  int source = 0;
  int sink = 0;
};

// Random DAG with a guaranteed source-sink path. With `half_integer_weights`
// ties become common, exercising the tie-break rules exactly.
inline RandomDag make_random_dag(Rng& rng, int max_nodes, int max_edges) {
  const int n = 2 + static_cast<int>(rng.next_u64() %
                                     static_cast<std::uint64_t>(max_nodes - 1));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[order[i]] = i;
  const int source = order.front();
  const int sink = order.back();

  std::vector<std::pair<int, int>> edges;
  // Spine guarantees reachability.
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(order[i], order[i + 1]);
  const int extra = static_cast<int>(
      rng.next_u64() % static_cast<std::uint64_t>(
                           std::max(1, max_edges - (n - 1))));
  for (int k = 0; k < extra; ++k) {
    const int a = static_cast<int>(rng.next_u64() % n);
    const int b = static_cast<int>(rng.next_u64() % n);
    if (a == b) continue;
    if (position[a] < position[b]) {
      edges.emplace_back(a, b);
    } else {
      edges.emplace_back(b, a);
    }
  }
  return {make_dag(n, std::move(edges)), source, sink};
}

inline vector_t random_weights(Rng& rng, index_t count, bool half_integer) {
  vector_t w(count);
  for (index_t e = 0; e < count; ++e) {
    if (half_integer) {
      w[e] = 0.5 * static_cast<scalar_t>(
                       static_cast<int>(rng.next_u64() % 9) - 4);
    } else {
      w[e] = rng.uniform(-5.0, 5.0);
    }
  }
  return w;
}

inline vector_t dirichlet_weights(Rng& rng, int count) {
  vector_t w(count);
  for (int i = 0; i < count; ++i) {
    scalar_t u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    w[i] = -std::log(u);
  }
  return w / w.sum();
}

// Uniform-ish random member of a built-in set (exact feasibility, not exact
// uniformity, is what the tests need).
inline vector_t random_member(const DecisionSet& set, Rng& rng) {
  switch (set.kind) {
    case SetKind::Box: {
      vector_t x(set.dimension);
      for (index_t i = 0; i < x.size(); ++i) {
        x[i] = rng.uniform(set.lower[i], set.upper[i]);
      }
      return x;
    }
    case SetKind::Simplex: {
      return vector_t(set.simplex_radius *
                      dirichlet_weights(rng, set.dimension));
    }
    case SetKind::Ball: {
      vector_t dir(set.dimension);
      for (index_t i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
      const scalar_t norm = dir.norm();
      if (norm == 0.0) return set.center;
      const scalar_t radius =
          set.ball_radius *
          std::pow(rng.uniform(), 1.0 / static_cast<scalar_t>(set.dimension));
      return set.center + (radius / norm) * dir;
    }
    case SetKind::FlowPolytope: {
      const auto paths = all_paths(set.dag, set.source, set.sink);
      const vector_t mix = dirichlet_weights(rng, static_cast<int>(paths.size()));
      vector_t x = vector_t::Zero(set.dimension);
      for (std::size_t i = 0; i < paths.size(); ++i) {
        for (int e : paths[i]) x[e] += mix[static_cast<index_t>(i)];
      }
      return x;
    }
  }
  throw std::logic_error("random_member: unknown kind");
}

// Exhaustive minimizer of F over the 2-simplex (dimension 3) on a regular
// grid with `steps` subdivisions per axis.
inline std::pair<vector_t, scalar_t> grid_min_simplex3(
    const std::function<scalar_t(const vector_t&)>& objective, scalar_t radius,
    int steps) {
  vector_t best(3);
  scalar_t best_value = std::numeric_limits<scalar_t>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      vector_t x(3);
      x[0] = radius * static_cast<scalar_t>(i) / steps;
      x[1] = radius * static_cast<scalar_t>(j) / steps;
      x[2] = radius - x[0] - x[1];
      const scalar_t value = objective(x);
      if (value < best_value) {
        best_value = value;
        best = x;
      }
    }
  }
  return {best, best_value};
}

}  // namespace cocokit::testing
