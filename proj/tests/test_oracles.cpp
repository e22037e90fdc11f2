#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "cocokit/dag.hpp"
#include "cocokit/decision_set.hpp"
#include "cocokit/flow.hpp"
#include "cocokit/ocg.hpp"
#include "helpers.hpp"

using namespace cocokit;
using namespace cocokit::testing;

namespace {

vector_t vec(std::initializer_list<scalar_t> values) {
  vector_t v(static_cast<index_t>(values.size()));
  index_t i = 0;
  for (scalar_t x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("make_dag rejects cycles and bad endpoints") {
  CHECK_THROWS_AS(make_dag(3, {{0, 1}, {1, 2}, {2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_dag(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(make_dag(2, {{1, 1}}), std::invalid_argument);
  const Dag dag = make_dag(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(dag.topo_order.size() == 3);
}

TEST_CASE("dag_shortest_path picks the lighter of two parallel edges") {
  const Dag dag = make_dag(2, {{0, 1}, {0, 1}});
  const auto path = dag_shortest_path(dag, vec({2.0, 5.0}), 0, 1);
  CHECK(path == std::vector<int>{0});
}

TEST_CASE("dag_shortest_path diamond with a negative edge") {
  // s=0, a=1, b=2, d=3: 0->1 (1), 1->3 (1), 0->2 (3), 2->3 (-2.5)
  const Dag dag = make_dag(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  const vector_t w = vec({1.0, 1.0, 3.0, -2.5});
  const auto path = dag_shortest_path(dag, w, 0, 3);
  CHECK(path == std::vector<int>{2, 3});
  CHECK(path_weight(path, w) == 0.5);
}

TEST_CASE("dag_shortest_path reports unreachable sinks") {
  const Dag dag = make_dag(3, {{0, 1}});
  CHECK_THROWS_AS(dag_shortest_path(dag, vec({1.0}), 0, 2),
                  std::runtime_error);
}

TEST_CASE("dag_shortest_path matches exhaustive enumeration on random DAGs") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomDag rd = make_random_dag(rng, 12, 30);
    const bool half_integer = trial % 2 == 0;
    const vector_t w = random_weights(
        rng, static_cast<index_t>(rd.dag.edges.size()), half_integer);
    const auto path = dag_shortest_path(rd.dag, w, rd.source, rd.sink);
    const auto [brute_path, brute_weight] =
        brute_shortest_path(rd.dag, w, rd.source, rd.sink);
    REQUIRE(path_weight(path, w) == brute_weight);
    REQUIRE(path == brute_path);
  }
}

TEST_CASE("lp_minimize closed forms") {
  SUBCASE("simplex vertex at the smallest coordinate") {
    const DecisionSet set = make_simplex(3, 1.0);
    CHECK(lp_minimize(set, vec({3.0, 1.0, 2.0})) == vec({0.0, 1.0, 0.0}));
  }
  SUBCASE("ball: radius against the direction") {
    const DecisionSet set = make_ball(vector_t::Zero(2), 2.0);
    const vector_t x = lp_minimize(set, vec({3.0, 4.0}));
    CHECK(x.isApprox(vec({-1.2, -1.6}), 1e-15));
  }
  SUBCASE("box: sign rule, zero coordinate tied to the lower bound") {
    const DecisionSet set = make_box(vec({0.0, 0.0, 0.0}), vec({1.0, 1.0, 1.0}));
    CHECK(lp_minimize(set, vec({-1.0, 0.5, 0.0})) == vec({1.0, 0.0, 0.0}));
  }
  SUBCASE("flow polytope: min-weight path incidence (vs enumeration)") {
    const Dag dag =
        make_dag(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {0, 4}});
    const DecisionSet set = make_flow_polytope(dag, 0, 4);
    const vector_t w = vec({1.0, 4.0, 2.0, -1.0, 0.5, 3.6});
    const vector_t x = lp_minimize(set, w);
    const auto [brute_path, brute_weight] = brute_shortest_path(dag, w, 0, 4);
    CHECK(x == path_incidence(dag, brute_path));
    CHECK(w.dot(x) == brute_weight);
  }
}

TEST_CASE("lp_minimize rejects bad directions") {
  const DecisionSet set = make_simplex(3, 1.0);
  CHECK_THROWS_AS(lp_minimize(set, vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(lp_minimize(set, vec({1.0, std::nan(""), 0.0})),
                  std::invalid_argument);
}

TEST_CASE("oracle optimality and exact scale equivariance on built-in sets") {
  Rng rng(5150);
  const Dag dag = make_dag(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {0, 4},
                               {1, 4}});
  std::vector<DecisionSet> sets;
  sets.push_back(make_box(vec({-1.0, 0.0, 2.0}), vec({1.0, 0.5, 3.0})));
  sets.push_back(make_simplex(4, 2.0));
  sets.push_back(make_ball(vec({0.5, -0.5}), 1.5));
  sets.push_back(make_flow_polytope(dag, 0, 4));

  for (const auto& set : sets) {
    std::vector<vector_t> members;
    for (int i = 0; i < 100; ++i) members.push_back(random_member(set, rng));
    for (const auto& member : members) {
      REQUIRE(membership(set, member, 1e-9));
    }
    for (int trial = 0; trial < 500; ++trial) {
      vector_t dir(set.dimension);
      for (index_t i = 0; i < dir.size(); ++i) dir[i] = rng.uniform(-1.0, 1.0);
      const vector_t x = lp_minimize(set, dir);
      REQUIRE(membership(set, x, 1e-9));
      const scalar_t value = dir.dot(x);
      for (const auto& member : members) {
        REQUIRE(value <= dir.dot(member) + 1e-9);
      }
      // Vertex selection is exactly invariant under any positive scaling;
      // the ball's closed form needs power-of-two factors so that alpha*dir
      // itself is exact.
      const bool vertex_set = set.kind != SetKind::Ball;
      const std::array<scalar_t, 3> alphas =
          vertex_set ? std::array<scalar_t, 3>{0.5, 3.0, 1e6}
                     : std::array<scalar_t, 3>{0.5, 1048576.0, 0x1.0p-20};
      for (scalar_t alpha : alphas) {
        REQUIRE(lp_minimize(set, vector_t(alpha * dir)) == x);
      }
    }
  }
}

TEST_CASE("project closed forms") {
  SUBCASE("box clamp") {
    const DecisionSet set = make_box(vec({0.0, 0.0}), vec({1.0, 1.0}));
    CHECK(project(set, vec({1.5, -0.2})) == vec({1.0, 0.0}));
  }
  SUBCASE("ball radial") {
    const DecisionSet set = make_ball(vector_t::Zero(2), 1.0);
    CHECK(project(set, vec({3.0, 4.0})).isApprox(vec({0.6, 0.8}), 1e-15));
  }
  SUBCASE("simplex via sorting") {
    const DecisionSet set = make_simplex(3, 1.0);
    const vector_t x = project(set, vec({0.9, 0.9, -0.5}));
    CHECK(x.isApprox(vec({0.5, 0.5, 0.0}), 1e-12));
  }
  SUBCASE("simplex projection beats a dense grid") {
    const DecisionSet set = make_simplex(3, 1.0);
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const vector_t y = vec({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                              rng.uniform(-2.0, 2.0)});
      const vector_t x = project(set, y);
      const auto [grid_point, grid_value] = grid_min_simplex3(
          [&](const vector_t& p) { return (p - y).squaredNorm(); }, 1.0, 400);
      CHECK((x - y).squaredNorm() <= grid_value + 1e-12);
      CHECK(membership(set, x, 1e-12));
    }
  }
  SUBCASE("flow polytope unsupported") {
    const Dag dag = make_dag(2, {{0, 1}});
    const DecisionSet set = make_flow_polytope(dag, 0, 1);
    CHECK_THROWS_AS(project(set, vec({0.5})), std::invalid_argument);
  }
}

TEST_CASE("project is idempotent and nonexpansive") {
  Rng rng(77);
  std::vector<DecisionSet> sets;
  sets.push_back(make_box(vec({-1.0, -1.0, -1.0}), vec({1.0, 2.0, 0.5})));
  sets.push_back(make_simplex(5, 1.0));
  sets.push_back(make_ball(vec({1.0, 2.0}), 0.7));
  for (const auto& set : sets) {
    for (int trial = 0; trial < 200; ++trial) {
      vector_t y1(set.dimension), y2(set.dimension);
      for (index_t i = 0; i < y1.size(); ++i) {
        y1[i] = rng.uniform(-3.0, 3.0);
        y2[i] = rng.uniform(-3.0, 3.0);
      }
      const vector_t p1 = project(set, y1);
      const vector_t p2 = project(set, y2);
      CHECK((project(set, p1) - p1).norm() <= 1e-12);
      CHECK((p1 - p2).norm() <= (y1 - y2).norm() + 1e-12);
    }
  }
}

TEST_CASE("membership on the simplex") {
  const DecisionSet set = make_simplex(2, 1.0);
  CHECK(membership(set, vec({0.3, 0.7}), 1e-9));
  CHECK_FALSE(membership(set, vec({0.3, 0.8}), 1e-9));
}

TEST_CASE("flow-polytope iterates of a conditional-gradient run stay members") {
  Rng rng(11);
  const Dag dag = make_dag(6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4},
                               {4, 5}, {0, 5}, {2, 5}});
  const DecisionSet set = make_flow_polytope(dag, 0, 5);
  OcgState state = ocg_init(set, 100);
  for (int t = 1; t <= 100; ++t) {
    vector_t grad(set.dimension);
    for (index_t i = 0; i < grad.size(); ++i) grad[i] = rng.uniform(-1.0, 1.0);
    ocg_step(state, grad);
    REQUIRE(membership(set, state.x_current, 1e-7));
  }
}

TEST_CASE("flow_decompose identity and symmetric split") {
  SUBCASE("a path's incidence vector decomposes to itself") {
    const Dag dag = make_dag(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
    const vector_t flow = vec({1.0, 1.0, 0.0, 0.0});
    const auto dec = flow_decompose(dag, flow, 0, 3);
    REQUIRE(dec.entries.size() == 1);
    CHECK(dec.entries[0].weight == 1.0);
    CHECK(dec.entries[0].path == std::vector<int>{0, 1});
  }
  SUBCASE("half/half over parallel edges") {
    const Dag dag = make_dag(2, {{0, 1}, {0, 1}});
    const auto dec = flow_decompose(dag, vec({0.5, 0.5}), 0, 1);
    REQUIRE(dec.entries.size() == 2);
    CHECK(dec.entries[0].weight == 0.5);
    CHECK(dec.entries[1].weight == 0.5);
  }
}

TEST_CASE("flow_decompose reconstructs random path mixtures") {
  Rng rng(404);
  const Dag dag = make_dag(6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4},
                               {4, 5}, {0, 5}, {2, 5}, {3, 5}});
  const auto paths = all_paths(dag, 0, 5);
  REQUIRE(paths.size() >= 4);
  for (int trial = 0; trial < 50; ++trial) {
    const vector_t mix = dirichlet_weights(rng, 4);
    vector_t flow = vector_t::Zero(static_cast<index_t>(dag.edges.size()));
    for (int i = 0; i < 4; ++i) {
      const std::size_t pick = rng.next_u64() % paths.size();
      for (int e : paths[pick]) flow[e] += mix[i];
    }
    const auto dec = flow_decompose(dag, flow, 0, 5);
    REQUIRE(dec.entries.size() <= dag.edges.size());
    vector_t rebuilt = vector_t::Zero(flow.size());
    scalar_t total = 0.0;
    for (const auto& entry : dec.entries) {
      CHECK(entry.weight > 0.0);
      total += entry.weight;
      for (int e : entry.path) rebuilt[e] += entry.weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK((rebuilt - flow).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("flow_decompose rejects broken conservation") {
  const Dag dag = make_dag(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(flow_decompose(dag, vec({1.0, 0.5}), 0, 2),
                  std::invalid_argument);
}

TEST_CASE("sample_path frequencies and determinism") {
  const Dag dag = make_dag(2, {{0, 1}, {0, 1}});
  SUBCASE("single entry is always returned") {
    const auto dec = flow_decompose(dag, vec({1.0, 0.0}), 0, 1);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
      CHECK(sample_path(dec, rng) == std::vector<int>{0});
    }
  }
  SUBCASE("half/half empirical frequency within 0.01") {
    const auto dec = flow_decompose(dag, vec({0.5, 0.5}), 0, 1);
    Rng rng(2);
    int first_count = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      if (sample_path(dec, rng) == std::vector<int>{0}) first_count += 1;
    }
    CHECK(std::abs(first_count / static_cast<scalar_t>(draws) - 0.5) < 0.01);
  }
  SUBCASE("fixed seed reproduces the draw sequence") {
    const auto dec = flow_decompose(dag, vec({0.9, 0.1}), 0, 1);
    Rng a(3), b(3);
    for (int i = 0; i < 1000; ++i) {
      CHECK(sample_path(dec, a) == sample_path(dec, b));
    }
  }
}

TEST_CASE("dag serialization round-trips") {
  const Dag dag = make_dag(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}});
  std::stringstream buffer;
  write_dag(buffer, dag, 0, 4);
  const DagFile file = read_dag(buffer);
  CHECK(file.dag.node_count == dag.node_count);
  CHECK(file.dag.edges == dag.edges);
  CHECK(file.source == 0);
  CHECK(file.sink == 4);

  std::stringstream bad("vertices 3 source 0 sink 2\n0 1\n");
  CHECK_THROWS_AS(read_dag(bad), std::invalid_argument);
}
