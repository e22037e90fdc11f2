#pragma once

#include <cmath>
#include <stdexcept>

#include "cocokit/decision_set.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

/** Projected online gradient descent with the adaptive step size
 *  eta_t = D / sqrt(2 sum ||grad||^2); the comparison baseline on decision
 *  sets with closed-form projection. Fed the same surrogate gradients as the
 *  conditional-gradient policy so the comparison isolates projection vs LP
 *  oracle. */
struct ProjectedState {
  const DecisionSet* set = nullptr;
  vector_t x_current;
  scalar_t sq_grad_sum = 0.0;
};

inline ProjectedState projected_init(const DecisionSet& set) {
  if (set.kind == SetKind::FlowPolytope) {
    throw std::invalid_argument(
        "projected_init: projection unavailable for this set");
  }
  ProjectedState state;
  state.set = &set;
  state.x_current = project(set, vector_t::Zero(set.dimension));
  return state;
}

inline const vector_t& projected_step(ProjectedState& state,
                                      const vector_t& grad) {
  if (state.set == nullptr) {
    throw std::logic_error("projected_step: uninitialized");
  }
  if (grad.size() != state.set->dimension || !grad.allFinite()) {
    throw std::invalid_argument("projected_step: bad gradient");
  }
  state.sq_grad_sum += grad.squaredNorm();
  if (state.sq_grad_sum == 0.0) return state.x_current;  // nothing observed yet
  const scalar_t eta =
      state.set->diameter / std::sqrt(2.0 * state.sq_grad_sum);
  state.x_current = project(*state.set, state.x_current - eta * grad);
  return state.x_current;
}

}  // namespace cocokit
