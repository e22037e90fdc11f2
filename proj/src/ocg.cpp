#include "cocokit/ocg.hpp"

#include <cmath>
#include <stdexcept>

namespace cocokit {

namespace {

// Keeps eta finite on an all-zero gradient stream.
constexpr scalar_t kLipschitzFloor = 1e-12;

// Negated first basis vector: the oracle then lands on the first vertex
// (e.g. (1,0,...,0) on the simplex) rather than a vertex avoiding it.
vector_t default_direction(const DecisionSet& set) {
  vector_t dir = vector_t::Zero(set.dimension);
  dir[0] = -1.0;
  return dir;
}

}  // namespace

OcgState ocg_init(const DecisionSet& set, int horizon,
                  std::optional<vector_t> seed_direction) {
  if (horizon < 1) throw std::invalid_argument("ocg_init: horizon < 1");
  OcgState state;
  state.set = &set;
  state.horizon = horizon;
  state.x_anchor = lp_minimize(
      set, seed_direction ? *seed_direction : default_direction(set));
  state.x_current = state.x_anchor;
  state.grad_sum = vector_t::Zero(set.dimension);
  return state;
}

const vector_t& ocg_step(OcgState& state, const vector_t& grad,
                         std::optional<scalar_t> lipschitz_hint) {
  if (state.set == nullptr) throw std::logic_error("ocg_step: uninitialized");
  if (grad.size() != state.set->dimension || !grad.allFinite()) {
    throw std::invalid_argument("ocg_step: bad gradient");
  }
  const int t = state.round + 1;

  scalar_t lipschitz = 0.0;
  if (lipschitz_hint) {
    if (*lipschitz_hint < state.lipschitz_max) {
      throw std::invalid_argument(
          "ocg_step: lipschitz hints must be non-decreasing");
    }
    lipschitz = *lipschitz_hint;
  } else {
    lipschitz = std::max(state.lipschitz_max, grad.norm());
  }
  const scalar_t lipschitz_eff = std::max(lipschitz, kLipschitzFloor);

  const scalar_t diameter = state.set->diameter;
  const scalar_t eta =
      diameter /
      (2.0 * lipschitz_eff * std::pow(static_cast<scalar_t>(state.horizon),
                                      0.75));

  state.grad_sum += grad;
  const vector_t reg_grad =
      state.grad_sum + (2.0 / eta) * (state.x_current - state.x_anchor);
  const vector_t vertex = lp_minimize(*state.set, reg_grad);
  const scalar_t sigma =
      std::min(1.0, 2.0 / std::sqrt(static_cast<scalar_t>(t)));

  state.x_current = (1.0 - sigma) * state.x_current + sigma * vertex;
  state.round = t;
  state.lipschitz_max = lipschitz;
  state.eta_current = eta;
  state.sigma_last = sigma;
  return state.x_current;
}

FtrlState ftrl_init(const DecisionSet& set, std::optional<vector_t> x1) {
  if (set.kind == SetKind::FlowPolytope) {
    throw std::invalid_argument("ftrl_init: set lacks closed-form projection");
  }
  FtrlState state;
  state.set = &set;
  state.x_anchor = x1 ? *x1 : lp_minimize(set, default_direction(set));
  state.x_current = state.x_anchor;
  state.grad_sum = vector_t::Zero(set.dimension);
  return state;
}

const vector_t& ftrl_step(FtrlState& state, const vector_t& grad,
                          scalar_t eta_next) {
  if (state.set == nullptr) throw std::logic_error("ftrl_step: uninitialized");
  if (grad.size() != state.set->dimension || !grad.allFinite()) {
    throw std::invalid_argument("ftrl_step: bad gradient");
  }
  if (eta_next <= 0.0 ||
      (!state.eta_trace.empty() && eta_next > state.eta_trace.back())) {
    throw std::invalid_argument("ftrl_step: eta must be positive and "
                                "non-increasing");
  }
  state.grad_sum += grad;
  state.eta_trace.push_back(eta_next);
  state.grad_norm_trace.push_back(grad.norm());

  // The objective equals ||x - m||^2 / eta plus a constant, so the exact
  // minimizer is the projection of m.
  const vector_t unconstrained =
      state.x_anchor - (eta_next / 2.0) * state.grad_sum;
  state.x_current = project(*state.set, unconstrained);
  return state.x_current;
}

scalar_t ftrl_regret_certificate(scalar_t diameter,
                                 const std::vector<scalar_t>& eta_trace,
                                 const std::vector<scalar_t>& grad_norm_trace) {
  if (eta_trace.empty() || eta_trace.size() != grad_norm_trace.size()) {
    throw std::invalid_argument("ftrl_regret_certificate: bad traces");
  }
  scalar_t sum = 0.0;
  for (std::size_t t = 0; t < eta_trace.size(); ++t) {
    const scalar_t eta_prev = t == 0 ? eta_trace[0] : eta_trace[t - 1];
    sum += eta_prev * grad_norm_trace[t] * grad_norm_trace[t];
  }
  return diameter * diameter / eta_trace.back() + 0.25 * sum;
}

}  // namespace cocokit
