#include "cocokit/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace cocokit {

vector_t sphere_sample(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sphere_sample: n < 1");
  vector_t u(n);
  while (true) {
    for (index_t i = 0; i < n; ++i) u[i] = rng.normal();
    const scalar_t norm = u.norm();
    if (norm > 1e-12) return u / norm;
  }
}

vector_t gradient_estimate(int n, scalar_t delta, scalar_t f_value,
                           const vector_t& u) {
  if (delta <= 0.0) throw std::invalid_argument("gradient_estimate: delta<=0");
  return (static_cast<scalar_t>(n) / delta) * f_value * u;
}

scalar_t smoothed_value_mc(const std::function<scalar_t(const vector_t&)>& f,
                           const vector_t& x, scalar_t delta, int samples,
                           Rng& rng) {
  if (samples < 1) throw std::invalid_argument("smoothed_value_mc: samples<1");
  const int n = static_cast<int>(x.size());
  scalar_t acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const vector_t u = sphere_sample(n, rng);
    const scalar_t radius =
        std::pow(rng.uniform(), 1.0 / static_cast<scalar_t>(n));
    acc += f(x + delta * radius * u);
  }
  return acc / static_cast<scalar_t>(samples);
}

ShrunkenSet make_shrunken(const DecisionSet& base, scalar_t delta) {
  ShrunkenSet set;
  set.base = &base;
  set.delta = delta;
  if (delta == 0.0) return set;
  if (delta < 0.0) throw std::invalid_argument("make_shrunken: delta < 0");
  if (!base.inner_radius || !base.origin_centered()) {
    throw std::invalid_argument(
        "make_shrunken: base set must be origin-centered with an inner "
        "radius");
  }
  if (delta > *base.inner_radius) {
    throw std::invalid_argument("make_shrunken: delta exceeds inner radius");
  }
  set.scale = 1.0 - delta / *base.inner_radius;
  return set;
}

vector_t shrunken_lp_minimize(const ShrunkenSet& set,
                              const vector_t& direction) {
  return set.scale * lp_minimize(*set.base, direction);
}

bool shrunken_membership(const ShrunkenSet& set, const vector_t& x,
                         scalar_t tol) {
  if (set.scale <= 0.0) return x.norm() <= tol;
  return membership(*set.base, x / set.scale, tol);
}

CgResult inner_cg(const ShrunkenSet& set, const vector_t& grad_sum,
                  const vector_t& anchor, scalar_t eta, const vector_t& x_in,
                  scalar_t epsilon, std::uint64_t max_iters) {
  if (eta <= 0.0 || epsilon <= 0.0) {
    throw std::invalid_argument("inner_cg: eta and epsilon must be positive");
  }
  const scalar_t threshold = epsilon / eta;
  const scalar_t outer_r = set.base->outer_radius;

  CgResult result;
  vector_t z = x_in;
  std::uint64_t cap = max_iters;
  while (true) {
    const vector_t grad_f = grad_sum + (2.0 / eta) * (z - anchor);
    if (!grad_f.allFinite()) {
      throw std::runtime_error("inner_cg: non-finite objective gradient");
    }
    const vector_t vertex = shrunken_lp_minimize(set, grad_f);
    result.oracle_calls += 1;
    const scalar_t gap = grad_f.dot(z - vertex);
    if (result.oracle_calls == 1) {
      result.initial_gap = gap;
      // Lemma cap for the eta-scaled objective (2-smooth, 2-strongly convex):
      // h1 is unknown, its upper bound eta * gap serves instead.
      const scalar_t h1 = eta * gap;
      if (h1 > epsilon) {
        const scalar_t lemma_cap =
            std::ceil(std::max(16.0 * outer_r * outer_r * (h1 - epsilon) /
                                   (epsilon * epsilon),
                               2.0 * (h1 - epsilon) / epsilon));
        const auto lemma_iters = static_cast<std::uint64_t>(lemma_cap);
        cap = cap == 0 ? lemma_iters : std::min(cap, lemma_iters);
      }
      if (cap == 0) cap = 1;
      result.cap = cap;
    }
    result.gap = gap;
    if (gap < threshold) break;
    if (static_cast<std::uint64_t>(result.iters) >= cap) {
      result.hit_cap = true;
      break;
    }
    const vector_t direction = vertex - z;
    const scalar_t denom = 2.0 * direction.squaredNorm();
    if (denom == 0.0) break;  // vertex == z implies gap == 0
    const scalar_t sigma = std::clamp(gap * eta / denom, 0.0, 1.0);
    z += sigma * direction;
    result.iters += 1;
  }
  result.point = std::move(z);
  return result;
}

BanditParams bandit_params(int T, const DecisionSet& base,
                           std::function<scalar_t(int)> sup_norm_bound,
                           std::function<scalar_t(int)> lipschitz_bound) {
  if (T < 1) throw std::invalid_argument("bandit_params: T < 1");
  if (!base.inner_radius || !base.origin_centered()) {
    throw std::invalid_argument(
        "bandit_params: bandit mode needs an origin-centered set with an "
        "inner radius");
  }
  BanditParams params;
  params.T = T;
  params.n = base.dimension;
  const auto horizon = static_cast<scalar_t>(T);
  params.K = static_cast<int>(std::ceil(std::sqrt(horizon)));
  const scalar_t r = *base.inner_radius;
  const scalar_t R = base.outer_radius;
  params.delta = std::min(
      std::sqrt(static_cast<scalar_t>(params.n)) * (r / R) *
          std::pow(horizon, -0.25),
      r);
  params.epsilon = 16.0 * R * R * std::log(horizon) / std::sqrt(horizon);
  params.sup_norm_bound = std::move(sup_norm_bound);
  params.lipschitz_bound = std::move(lipschitz_bound);
  return params;
}

namespace {

void bbcg_close_block(BbcgState& state) {
  state.grad_sum += state.grad_accum;
  const int m = state.block;
  const scalar_t sup_norm = state.params.sup_norm_bound(m);
  const scalar_t lipschitz = state.params.lipschitz_bound(m);
  const scalar_t g_m =
      std::sqrt(static_cast<scalar_t>(state.params.n)) * sup_norm + lipschitz;
  if (g_m < state.g_last) {
    throw std::invalid_argument(
        "bbcg: block bounds must be non-decreasing in m");
  }
  const scalar_t eta =
      state.set.base->diameter /
      (g_m * std::pow(static_cast<scalar_t>(state.params.T), 0.75));

  CgResult cg = inner_cg(state.set, state.grad_sum, state.x_anchor, eta,
                         state.x_block, state.params.epsilon);
  state.oracle_calls += cg.oracle_calls;
  state.x_block = std::move(cg.point);
  state.eta_last = eta;
  state.g_last = g_m;
  state.last_cg_iters = cg.iters;
  state.last_cg_gap = cg.gap;
  state.block += 1;
  state.s_in_block = 0;
  state.grad_accum.setZero();
}

}  // namespace

BbcgState bbcg_init(const BanditParams& params, const ShrunkenSet& set,
                    Rng rng) {
  if (params.delta <= 0.0) {
    throw std::invalid_argument("bbcg_init: delta must be positive");
  }
  BbcgState state;
  state.params = params;
  state.set = set;
  state.rng = rng;
  vector_t dir = vector_t::Zero(params.n);
  dir[0] = -1.0;
  state.x_anchor = shrunken_lp_minimize(set, dir);
  state.oracle_calls = 1;
  state.x_block = state.x_anchor;
  state.grad_accum = vector_t::Zero(params.n);
  state.grad_sum = vector_t::Zero(params.n);
  state.u_current = sphere_sample(params.n, state.rng);
  state.y_current = state.x_block + params.delta * state.u_current;
  return state;
}

const vector_t& bbcg_play(const BbcgState& state) {
  if (state.done) throw std::logic_error("bbcg_play: horizon exhausted");
  return state.y_current;
}

void bbcg_feed(BbcgState& state, scalar_t value) {
  if (state.done) throw std::logic_error("bbcg_feed: horizon exhausted");
  if (!std::isfinite(value)) {
    throw std::invalid_argument("bbcg_feed: non-finite value");
  }
  state.grad_accum += gradient_estimate(state.params.n, state.params.delta,
                                        value, state.u_current);
  state.t += 1;
  state.s_in_block += 1;

  const bool block_complete =
      state.s_in_block == state.params.K || state.t == state.params.T;
  if (block_complete) bbcg_close_block(state);

  if (state.t == state.params.T) {
    state.done = true;
    return;
  }
  state.u_current = sphere_sample(state.params.n, state.rng);
  state.y_current = state.x_block + state.params.delta * state.u_current;
}

BanditTrace bbcg_run(const BanditParams& params, const ShrunkenSet& set,
                     const std::function<scalar_t(int, const vector_t&)>&
                         bandit_losses,
                     Rng rng) {
  BbcgState state = bbcg_init(params, set, rng);
  BanditTrace trace;
  trace.plays.reserve(params.T);
  trace.block_of_round.reserve(params.T);
  for (int t = 1; t <= params.T; ++t) {
    const vector_t y = bbcg_play(state);
    trace.plays.push_back(y);
    trace.block_of_round.push_back(state.block);
    const int block_before = state.block;
    bbcg_feed(state, bandit_losses(t, y));
    if (state.block != block_before) {
      trace.blocks.push_back({block_before, state.last_cg_iters,
                              state.last_cg_gap, state.oracle_calls});
    }
  }
  return trace;
}

CbcoState cbco_init(int T, scalar_t G, const DecisionSet& base,
                    scalar_t value_bound_f, scalar_t value_bound_g, Rng rng) {
  CbcoState state;
  state.params = coco_params(T, G, base.diameter);
  // Larger queue initialization than the full-information policy; keeps the
  // overestimate ratio bounded.
  state.params.Q0 = G * base.diameter *
                    std::sqrt(static_cast<scalar_t>(T)) *
                    std::log(static_cast<scalar_t>(T));
  state.gd = G * base.diameter;
  state.queue = state.params.Q0;
  state.lambda_cell = std::make_shared<scalar_t>(0.0);

  // Normalized surrogate bounds: |f| + lambda |g| and G (1 + lambda).
  auto cell = state.lambda_cell;
  auto sup_norm = [cell, value_bound_f, value_bound_g](int) {
    return value_bound_f + *cell * value_bound_g;
  };
  auto lipschitz = [cell, G](int) { return G * (1.0 + *cell); };

  BanditParams bparams = bandit_params(T, base, sup_norm, lipschitz);
  ShrunkenSet shrunken = make_shrunken(base, bparams.delta);
  state.inner = bbcg_init(bparams, shrunken, rng);
  return state;
}

const vector_t& cbco_play(const CbcoState& state) {
  return bbcg_play(state.inner);
}

const vector_t& cbco_step(CbcoState& state, const BanditFeedback& fb) {
  if (!std::isfinite(fb.f_value) || !std::isfinite(fb.g_value)) {
    throw std::invalid_argument("cbco_step: non-finite feedback");
  }
  const scalar_t q_hat = state.queue + state.gd;
  const scalar_t lambda_hat = lambda_weight(state.params, q_hat);
  state.lambda_hat_last = lambda_hat;
  *state.lambda_cell = lambda_hat;

  const scalar_t surrogate =
      fb.f_value + lambda_hat * positive_part(fb.g_value);
  state.queue += positive_part(fb.g_value);
  bbcg_feed(state.inner, surrogate);
  return state.inner.y_current;
}

}  // namespace cocokit
