#pragma once

#include <optional>
#include <vector>

#include "cocokit/decision_set.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

/** State of the adaptive online conditional-gradient policy. One lp_minimize
 *  call per step; the learning rate eta_t = D / (2 L_t T^{3/4}) tracks the
 *  running Lipschitz estimate L_t. Single-owner: mutate sequentially. */
struct OcgState {
  const DecisionSet* set = nullptr;
  int horizon = 0;
  int round = 0;
  vector_t x_current;
  vector_t x_anchor;
  vector_t grad_sum;
  scalar_t lipschitz_max = 0.0;
  scalar_t eta_current = 0.0;
  scalar_t sigma_last = 0.0;
};

/** x_1 = lp_minimize(set, seed_direction), defaulting to the first standard
 *  basis vector. */
OcgState ocg_init(const DecisionSet& set, int horizon,
                  std::optional<vector_t> seed_direction = std::nullopt);

/** One round: ingest the gradient observed at x_t, solve the LP on the
 *  regularized cumulative gradient, and blend with sigma_t = min(1, 2/sqrt(t)).
 *  `lipschitz_hint`, when given, must keep the running constant monotone;
 *  otherwise L_t is the running max of gradient norms. Returns x_{t+1}. */
const vector_t& ocg_step(OcgState& state, const vector_t& grad,
                         std::optional<scalar_t> lipschitz_hint = std::nullopt);

/** Follow-the-regularized-leader with the time-varying Euclidean regularizer
 *  ||x - x_1||^2 / eta_t. Exact minimizer via closed-form projection, so it
 *  only supports box/simplex/ball; it exists to validate the OCG analysis. */
struct FtrlState {
  const DecisionSet* set = nullptr;
  vector_t x_current;
  vector_t x_anchor;
  vector_t grad_sum;
  std::vector<scalar_t> eta_trace;        // eta_1 ... eta_t (eta_0 == eta_1)
  std::vector<scalar_t> grad_norm_trace;  // ||grad_1|| ... ||grad_t||
};

FtrlState ftrl_init(const DecisionSet& set,
                    std::optional<vector_t> x1 = std::nullopt);

const vector_t& ftrl_step(FtrlState& state, const vector_t& grad,
                          scalar_t eta_next);

/** Upper bound D^2/eta_T + (1/4) sum_t eta_{t-1} g_t^2 that measured FTRL
 *  regret must satisfy for any comparator (eta_0 taken as eta_1). */
scalar_t ftrl_regret_certificate(scalar_t diameter,
                                 const std::vector<scalar_t>& eta_trace,
                                 const std::vector<scalar_t>& grad_norm_trace);

}  // namespace cocokit
