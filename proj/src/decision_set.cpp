#include "cocokit/decision_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cocokit {

namespace {

void check_direction(const DecisionSet& set, const vector_t& direction) {
  if (direction.size() != set.dimension) {
    throw std::invalid_argument("lp_minimize: direction dimension mismatch");
  }
  if (!direction.allFinite()) {
    throw std::invalid_argument("lp_minimize: non-finite direction");
  }
}

}  // namespace

bool DecisionSet::origin_centered() const {
  switch (kind) {
    case SetKind::Ball:
      return center.isZero(0.0);
    case SetKind::Box:
      return (lower + upper).isZero(0.0);
    default:
      return false;
  }
}

DecisionSet make_box(vector_t lower, vector_t upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("make_box: bad bounds");
  }
  if ((upper - lower).minCoeff() < 0.0) {
    throw std::invalid_argument("make_box: lower > upper");
  }
  DecisionSet set;
  set.kind = SetKind::Box;
  set.dimension = static_cast<int>(lower.size());
  set.diameter = (upper - lower).norm();
  set.outer_radius = lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
  if ((lower + upper).isZero(0.0)) {
    set.inner_radius = upper.minCoeff();
  }
  set.lower = std::move(lower);
  set.upper = std::move(upper);
  return set;
}

DecisionSet make_simplex(int dimension, scalar_t radius) {
  if (dimension < 1 || radius <= 0.0) {
    throw std::invalid_argument("make_simplex: bad arguments");
  }
  DecisionSet set;
  set.kind = SetKind::Simplex;
  set.dimension = dimension;
  set.simplex_radius = radius;
  set.diameter = dimension > 1 ? radius * std::sqrt(2.0) : 0.0;
  if (set.diameter == 0.0) set.diameter = radius;  // degenerate 1-d simplex
  set.outer_radius = radius;
  return set;
}

DecisionSet make_ball(vector_t center, scalar_t radius) {
  if (center.size() == 0 || radius <= 0.0) {
    throw std::invalid_argument("make_ball: bad arguments");
  }
  DecisionSet set;
  set.kind = SetKind::Ball;
  set.dimension = static_cast<int>(center.size());
  set.diameter = 2.0 * radius;
  set.outer_radius = center.norm() + radius;
  set.inner_radius = radius;
  set.ball_radius = radius;
  set.center = std::move(center);
  return set;
}

DecisionSet make_flow_polytope(Dag dag, int source, int sink) {
  if (source < 0 || source >= dag.node_count || sink < 0 ||
      sink >= dag.node_count || source == sink) {
    throw std::invalid_argument("make_flow_polytope: bad source/sink");
  }
  if (!dag_has_path(dag, source, sink)) {
    throw std::invalid_argument("make_flow_polytope: sink unreachable");
  }
  DecisionSet set;
  set.kind = SetKind::FlowPolytope;
  set.dimension = static_cast<int>(dag.edges.size());
  set.diameter = std::sqrt(2.0 * static_cast<scalar_t>(dag.edges.size()));
  set.outer_radius = std::sqrt(static_cast<scalar_t>(dag.edges.size()));
  set.source = source;
  set.sink = sink;
  set.dag = std::move(dag);
  return set;
}

vector_t lp_minimize(const DecisionSet& set, const vector_t& direction) {
  check_direction(set, direction);
  set.lp_calls += 1;
  switch (set.kind) {
    case SetKind::Box: {
      vector_t x(set.dimension);
      for (index_t i = 0; i < x.size(); ++i) {
        x[i] = direction[i] < 0.0 ? set.upper[i] : set.lower[i];
      }
      return x;
    }
    case SetKind::Simplex: {
      index_t best = 0;
      for (index_t i = 1; i < direction.size(); ++i) {
        if (direction[i] < direction[best]) best = i;
      }
      vector_t x = vector_t::Zero(set.dimension);
      x[best] = set.simplex_radius;
      return x;
    }
    case SetKind::Ball: {
      const scalar_t norm = direction.norm();
      if (norm == 0.0) return set.center;
      return set.center - (set.ball_radius / norm) * direction;
    }
    case SetKind::FlowPolytope: {
      const auto path =
          dag_shortest_path(set.dag, direction, set.source, set.sink);
      return path_incidence(set.dag, path);
    }
  }
  throw std::logic_error("lp_minimize: unknown set kind");
}

vector_t project(const DecisionSet& set, const vector_t& y) {
  if (y.size() != set.dimension) {
    throw std::invalid_argument("project: dimension mismatch");
  }
  if (!y.allFinite()) throw std::invalid_argument("project: non-finite input");
  switch (set.kind) {
    case SetKind::Box:
      return y.cwiseMax(set.lower).cwiseMin(set.upper);
    case SetKind::Ball: {
      const scalar_t dist = (y - set.center).norm();
      if (dist <= set.ball_radius) return y;
      return set.center + (set.ball_radius / dist) * (y - set.center);
    }
    case SetKind::Simplex: {
      // Sorting-based projection onto { x >= 0, sum x = a }.
      std::vector<scalar_t> u(y.data(), y.data() + y.size());
      std::sort(u.begin(), u.end(), std::greater<>());
      scalar_t cumsum = 0.0;
      scalar_t tau = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        cumsum += u[j];
        const scalar_t cand = (cumsum - set.simplex_radius) /
                              static_cast<scalar_t>(j + 1);
        if (u[j] - cand > 0.0) tau = cand;
      }
      return (y.array() - tau).cwiseMax(0.0);
    }
    case SetKind::FlowPolytope:
      throw std::invalid_argument(
          "project: no closed-form projection for the flow polytope");
  }
  throw std::logic_error("project: unknown set kind");
}

bool membership(const DecisionSet& set, const vector_t& x, scalar_t tol) {
  if (x.size() != set.dimension || !x.allFinite()) return false;
  switch (set.kind) {
    case SetKind::Box:
      return (x - set.lower).minCoeff() >= -tol &&
             (set.upper - x).minCoeff() >= -tol;
    case SetKind::Simplex:
      return x.minCoeff() >= -tol &&
             std::abs(x.sum() - set.simplex_radius) <= tol;
    case SetKind::Ball:
      return (x - set.center).norm() <= set.ball_radius + tol;
    case SetKind::FlowPolytope: {
      if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
      vector_t net = vector_t::Zero(set.dag.node_count);
      for (std::size_t e = 0; e < set.dag.edges.size(); ++e) {
        net[set.dag.edges[e].first] += x[static_cast<index_t>(e)];
        net[set.dag.edges[e].second] -= x[static_cast<index_t>(e)];
      }
      for (int v = 0; v < set.dag.node_count; ++v) {
        scalar_t want = 0.0;
        if (v == set.source) want = 1.0;
        if (v == set.sink) want = -1.0;
        if (std::abs(net[v] - want) > tol) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace cocokit
