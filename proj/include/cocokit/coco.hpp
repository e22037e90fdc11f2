#pragma once

#include <optional>

#include "cocokit/metrics.hpp"
#include "cocokit/ocg.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

/** Parameters of the surrogate-cost construction. V = (c m^2 T^{3/4})^m with
 *  m = ln T overflows doubles almost immediately, so only log V is stored and
 *  every potential evaluation happens in log space. The oracle is invariant
 *  to dividing the surrogate by V, so all gradients and Lipschitz hints
 *  produced here are the V-normalized ones. */
struct CocoParams {
  int T = 0;
  scalar_t G = 0.0;        // common Lipschitz bound of f_t and g_t
  scalar_t D = 0.0;        // decision-set diameter
  scalar_t m = 0.0;        // potential exponent, ln T in production
  scalar_t c = 0.0;        // 144 G D
  scalar_t logV = 0.0;     // m ln(c m^2 T^{3/4})
  scalar_t Q0 = 0.0;       // queue initialization, G D ln T
};

/** Production parameters; T >= 8 required. */
CocoParams coco_params(int T, scalar_t G, scalar_t D);

/** Diagnostics-only override with explicit small (m, V, Q0) so tests can
 *  cross-check the log-space path against direct arithmetic. */
CocoParams coco_params_override(int T, scalar_t G, scalar_t D, scalar_t m,
                                scalar_t V, scalar_t Q0);

/** lambda = Phi'(Q) / V = exp(ln m + (m-1) ln Q - log V); the normalized
 *  weight of the constraint term in the surrogate cost. Underflow to zero for
 *  small Q is the correct limit. */
scalar_t lambda_weight(const CocoParams& params, scalar_t queue);

struct SurrogateGradient {
  vector_t grad;        // f_grad + lambda * subgrad(g^+)
  scalar_t lipschitz;   // G (1 + lambda), the normalized L_t
  scalar_t lambda;
};

/** Gradient of the (V-normalized) surrogate cost at the played point. The
 *  subgradient of g^+ at g <= 0 is taken as zero, which makes the
 *  void-constraint reduction to plain OCO exact. `queue` must already include
 *  this round's violation. */
SurrogateGradient surrogate_gradient(const CocoParams& params, scalar_t queue,
                                     const FirstOrderFeedback& fb);

/** L_t / L_{t-1} = (1 + lambda(Q_now)) / (1 + lambda(Q_prev)); bounded by
 *  1 + e whenever per-round violations stay below G D. */
scalar_t lemma3_ratio(const CocoParams& params, scalar_t queue_prev,
                      scalar_t queue_now);

struct CocoState {
  CocoParams params;
  scalar_t queue = 0.0;  // Q(t), starts at Q0
  OcgState ocg;
  scalar_t lambda_last = 0.0;
  scalar_t max_lemma3_ratio = 1.0;
  scalar_t queue_after_first = 0.0;  // Q(1), for the end-of-run ratio check
};

CocoState coco_init(const CocoParams& params, const DecisionSet& set,
                    std::optional<vector_t> seed_direction = std::nullopt);

/** One meta-round: fold the observed violation into the queue, form the
 *  surrogate gradient, and advance the inner OCG. Returns x_{t+1}. */
const vector_t& coco_step(CocoState& state, const FirstOrderFeedback& fb);

/** ln(L_T / L_1) computed from the two queue values; the end-of-run check
 *  compares it against m^2 (i.e. (ln T)^2). The V factor cancels. */
scalar_t lemma4_log_ratio(const CocoParams& params, scalar_t queue_first,
                          scalar_t queue_last);

}  // namespace cocokit
