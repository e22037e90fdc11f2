#pragma once

#include <cmath>
#include <stdexcept>

#include "cocokit/types.hpp"

namespace cocokit {

/** max(0, v); the per-round constraint-violation penalty. */
inline scalar_t positive_part(scalar_t v) { return v > 0.0 ? v : 0.0; }

/** Full first-order feedback revealed after a round: values and gradients of
 *  the cost f and the constraint g at the played point. */
struct FirstOrderFeedback {
  scalar_t f_value = 0.0;
  vector_t f_grad;
  scalar_t g_value = 0.0;
  vector_t g_grad;
};

/** Bandit feedback: only the two values at the played point. */
struct BanditFeedback {
  scalar_t f_value = 0.0;
  scalar_t g_value = 0.0;
};

/** Running regret / cumulative-violation accounting. Accumulation is plain
 *  left-to-right double summation so reruns are bit-identical. */
struct GameMetrics {
  scalar_t cum_cost = 0.0;
  scalar_t comparator_cum_cost = 0.0;
  scalar_t ccv = 0.0;
  int round = 0;

  scalar_t regret() const { return cum_cost - comparator_cum_cost; }
};

inline GameMetrics update_metrics(GameMetrics m, scalar_t f_at_x,
                                  scalar_t f_at_comp, scalar_t g_at_x) {
  if (!std::isfinite(f_at_x) || !std::isfinite(f_at_comp) ||
      !std::isfinite(g_at_x)) {
    throw std::invalid_argument("update_metrics: non-finite input");
  }
  m.cum_cost += f_at_x;
  m.comparator_cum_cost += f_at_comp;
  m.ccv += positive_part(g_at_x);
  m.round += 1;
  return m;
}

}  // namespace cocokit
