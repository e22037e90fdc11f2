#pragma once

#include <vector>

#include "cocokit/dag.hpp"
#include "cocokit/rng.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

/** A unit s-d flow expressed as a convex combination of at most |E| paths. */
struct PathDecomposition {
  struct Entry {
    std::vector<int> path;  // edge indices, source to sink
    scalar_t weight = 0.0;
  };
  std::vector<Entry> entries;
};

/** Decomposes a unit-value flow (conservation within 1e-7) into weighted
 *  paths by repeatedly tracing the max-residual outgoing edge and removing
 *  the bottleneck. Residuals below 1e-12 are treated as exhausted. Throws
 *  std::invalid_argument when conservation is violated beyond tolerance. */
PathDecomposition flow_decompose(const Dag& dag, const vector_t& flow, int s,
                                 int d);

/** Draws entry i with probability weight_i; expected incidence equals the
 *  decomposed flow. */
const std::vector<int>& sample_path(const PathDecomposition& dec, Rng& rng);

}  // namespace cocokit
