#pragma once

#include <cstdint>
#include <optional>

#include "cocokit/dag.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

enum class SetKind { Box, Simplex, Ball, FlowPolytope };

/** A structured convex decision set accessed through a linear-minimization
 *  oracle. `diameter` is the exact Euclidean diameter for box/simplex/ball
 *  and the sqrt(2|E|) upper bound for the flow polytope (an upper bound is
 *  all the step-size formulas need). `inner_radius`, when present, is the
 *  radius of a ball around `center` contained in the set. */
struct DecisionSet {
  SetKind kind = SetKind::Box;
  int dimension = 0;
  scalar_t diameter = 0.0;
  std::optional<scalar_t> inner_radius;
  scalar_t outer_radius = 0.0;  // set is contained in outer_radius * unit ball

  // box
  vector_t lower, upper;
  // simplex { x >= 0, sum x = simplex_radius }
  scalar_t simplex_radius = 0.0;
  // ball
  vector_t center;
  scalar_t ball_radius = 0.0;
  // flow polytope: convex hull of s-d path incidence vectors
  Dag dag;
  int source = 0;
  int sink = 0;

  // Cumulative lp_minimize invocations; the experiment harness snapshots it
  // to report exact per-round oracle-call counts.
  mutable std::uint64_t lp_calls = 0;

  bool origin_centered() const;
};

DecisionSet make_box(vector_t lower, vector_t upper);
DecisionSet make_simplex(int dimension, scalar_t radius);
DecisionSet make_ball(vector_t center, scalar_t radius);
DecisionSet make_flow_polytope(Dag dag, int source, int sink);

/** argmin_{x in set} <direction, x>. Returns a vertex for polytopes, with
 *  deterministic tie-breaking (lowest index / smallest predecessor edge). */
vector_t lp_minimize(const DecisionSet& set, const vector_t& direction);

/** Euclidean projection; box/simplex/ball only. Throws
 *  std::invalid_argument for the flow polytope, for which the projected
 *  baseline is unavailable. */
vector_t project(const DecisionSet& set, const vector_t& y);

/** True iff x satisfies the set's defining constraints within tol. */
bool membership(const DecisionSet& set, const vector_t& x, scalar_t tol);

}  // namespace cocokit
