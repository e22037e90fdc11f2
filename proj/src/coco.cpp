#include "cocokit/coco.hpp"

#include <cmath>
#include <stdexcept>

namespace cocokit {

CocoParams coco_params(int T, scalar_t G, scalar_t D) {
  if (T < 8) throw std::invalid_argument("coco_params: T must be >= 8");
  if (G <= 0.0 || D <= 0.0) {
    throw std::invalid_argument("coco_params: G and D must be positive");
  }
  CocoParams params;
  params.T = T;
  params.G = G;
  params.D = D;
  params.m = std::log(static_cast<scalar_t>(T));
  params.c = 144.0 * G * D;
  params.logV =
      params.m * std::log(params.c * params.m * params.m *
                          std::pow(static_cast<scalar_t>(T), 0.75));
  params.Q0 = G * D * params.m;
  return params;
}

CocoParams coco_params_override(int T, scalar_t G, scalar_t D, scalar_t m,
                                scalar_t V, scalar_t Q0) {
  if (m <= 1.0 || V <= 0.0 || Q0 <= 0.0) {
    throw std::invalid_argument("coco_params_override: bad overrides");
  }
  CocoParams params;
  params.T = T;
  params.G = G;
  params.D = D;
  params.m = m;
  params.c = 144.0 * G * D;
  params.logV = std::log(V);
  params.Q0 = Q0;
  return params;
}

scalar_t lambda_weight(const CocoParams& params, scalar_t queue) {
  if (queue <= 0.0) {
    throw std::invalid_argument("lambda_weight: queue must be positive");
  }
  return std::exp(std::log(params.m) + (params.m - 1.0) * std::log(queue) -
                  params.logV);
}

SurrogateGradient surrogate_gradient(const CocoParams& params, scalar_t queue,
                                     const FirstOrderFeedback& fb) {
  SurrogateGradient out;
  out.lambda = lambda_weight(params, queue);
  if (fb.g_value > 0.0) {
    out.grad = fb.f_grad + out.lambda * fb.g_grad;
  } else {
    out.grad = fb.f_grad;
  }
  out.lipschitz = params.G * (1.0 + out.lambda);
  return out;
}

scalar_t lemma3_ratio(const CocoParams& params, scalar_t queue_prev,
                      scalar_t queue_now) {
  return (1.0 + lambda_weight(params, queue_now)) /
         (1.0 + lambda_weight(params, queue_prev));
}

CocoState coco_init(const CocoParams& params, const DecisionSet& set,
                    std::optional<vector_t> seed_direction) {
  CocoState state;
  state.params = params;
  state.queue = params.Q0;
  state.ocg = ocg_init(set, params.T, std::move(seed_direction));
  return state;
}

const vector_t& coco_step(CocoState& state, const FirstOrderFeedback& fb) {
  if (!std::isfinite(fb.f_value) || !std::isfinite(fb.g_value)) {
    throw std::invalid_argument("coco_step: non-finite feedback");
  }
  const scalar_t queue_prev = state.queue;
  state.queue += positive_part(fb.g_value);
  if (state.ocg.round == 0) state.queue_after_first = state.queue;

  const scalar_t ratio =
      lemma3_ratio(state.params, queue_prev, state.queue);
  state.max_lemma3_ratio = std::max(state.max_lemma3_ratio, ratio);

  const SurrogateGradient sg =
      surrogate_gradient(state.params, state.queue, fb);
  state.lambda_last = sg.lambda;
  return ocg_step(state.ocg, sg.grad, sg.lipschitz);
}

scalar_t lemma4_log_ratio(const CocoParams& params, scalar_t queue_first,
                          scalar_t queue_last) {
  return std::log((1.0 + lambda_weight(params, queue_last)) /
                  (1.0 + lambda_weight(params, queue_first)));
}

}  // namespace cocokit
