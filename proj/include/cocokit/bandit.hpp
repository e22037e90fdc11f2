#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cocokit/coco.hpp"
#include "cocokit/decision_set.hpp"
#include "cocokit/metrics.hpp"
#include "cocokit/rng.hpp"
#include "cocokit/types.hpp"

namespace cocokit {

/** Uniform draw from the unit sphere in R^n (normalized standard normals). */
vector_t sphere_sample(int n, Rng& rng);

/** One-point smoothed-gradient estimate (n/delta) f(x + delta u) u. */
vector_t gradient_estimate(int n, scalar_t delta, scalar_t f_value,
                           const vector_t& u);

/** Monte-Carlo value of the delta-smoothed function: average of f over the
 *  delta-ball around x (sphere direction scaled by U^{1/n}). Test support. */
scalar_t smoothed_value_mc(const std::function<scalar_t(const vector_t&)>& f,
                           const vector_t& x, scalar_t delta, int samples,
                           Rng& rng);

/** The scaled set (1 - delta/r) X. Points of the shrunken set keep a delta
 *  margin inside the base set, so delta-perturbed plays stay feasible.
 *  delta == 0 degenerates to the base set (used by the inner CG on sets
 *  without an inner radius). Linear minimization over the shrunken set is the
 *  base oracle output scaled, exactly. */
struct ShrunkenSet {
  const DecisionSet* base = nullptr;
  scalar_t delta = 0.0;
  scalar_t scale = 1.0;
};

ShrunkenSet make_shrunken(const DecisionSet& base, scalar_t delta);

vector_t shrunken_lp_minimize(const ShrunkenSet& set,
                              const vector_t& direction);
bool shrunken_membership(const ShrunkenSet& set, const vector_t& x,
                         scalar_t tol);

/** Result of the conditional-gradient run with stopping condition. `gap` is
 *  the Frank-Wolfe duality gap at exit; when `hit_cap` is false the exit was
 *  via gap < epsilon / eta and `gap` certifies F(point) - F(x*) <= gap. */
struct CgResult {
  vector_t point;
  scalar_t gap = 0.0;
  int iters = 0;          // line-search steps taken
  std::uint64_t oracle_calls = 0;
  scalar_t initial_gap = 0.0;
  std::uint64_t cap = 0;  // iteration cap that was in force
  bool hit_cap = false;
};

/** Minimizes F(x) = <grad_sum, x> + ||x - anchor||^2 / eta over the shrunken
 *  set by Frank-Wolfe with exact line search, stopping once the duality gap
 *  drops below epsilon / eta. The iteration cap follows the
 *  max{16 R^2 (h1-eps)/eps^2, 2 (h1-eps)/eps} bound with h1 conservatively
 *  replaced by the initial (eta-scaled) gap; pass max_iters > 0 to tighten it
 *  further. */
CgResult inner_cg(const ShrunkenSet& set, const vector_t& grad_sum,
                  const vector_t& anchor, scalar_t eta, const vector_t& x_in,
                  scalar_t epsilon, std::uint64_t max_iters = 0);

/** Block/exploration parameters of the bandit policy. The schedules return
 *  the sup-norm and Lipschitz bounds M_{mK}, L_{mK} for block m (1-based) and
 *  must be non-decreasing; the harness supplies them analytically. */
struct BanditParams {
  int T = 0;
  int K = 0;          // block length, ceil(sqrt(T))
  int n = 0;          // dimension
  scalar_t delta = 0.0;    // sqrt(n) (r/R) T^{-1/4}, clamped to <= r
  scalar_t epsilon = 0.0;  // 16 R^2 T^{-1/2} ln T
  std::function<scalar_t(int)> sup_norm_bound;
  std::function<scalar_t(int)> lipschitz_bound;
};

BanditParams bandit_params(int T, const DecisionSet& base,
                           std::function<scalar_t(int)> sup_norm_bound,
                           std::function<scalar_t(int)> lipschitz_bound);

/** Push-style state of the adaptive block bandit conditional-gradient loop:
 *  query the current perturbed play, evaluate the loss there, feed the value
 *  back. Block transitions (gradient flush + inner CG) happen inside feed. */
struct BbcgState {
  BanditParams params;
  ShrunkenSet set;
  Rng rng;
  int t = 0;           // rounds completed
  int block = 1;       // current block (1-based)
  int s_in_block = 0;  // rounds completed inside the current block
  vector_t x_anchor;
  vector_t x_block;    // base action of the current block
  vector_t grad_accum; // within-block estimate sum
  vector_t grad_sum;   // over completed blocks
  vector_t u_current;
  vector_t y_current;  // x_block + delta * u_current
  scalar_t eta_last = 0.0;
  scalar_t g_last = 0.0;  // G_m of the last completed block
  int last_cg_iters = 0;
  scalar_t last_cg_gap = 0.0;
  std::uint64_t oracle_calls = 0;
  bool done = false;
};

BbcgState bbcg_init(const BanditParams& params, const ShrunkenSet& set,
                    Rng rng);

/** The point to play this round. */
const vector_t& bbcg_play(const BbcgState& state);

/** Consumes the observed loss value at the current play and advances. */
void bbcg_feed(BbcgState& state, scalar_t value);

struct BlockRecord {
  int block = 0;
  int cg_iters = 0;
  scalar_t cg_gap = 0.0;
  std::uint64_t oracle_calls_cum = 0;
};

struct BanditTrace {
  std::vector<vector_t> plays;      // y_1 ... y_T
  std::vector<int> block_of_round;  // 1-based block index per round
  std::vector<BlockRecord> blocks;
};

/** Runs the full blocked loop against a round-indexed value oracle. */
BanditTrace bbcg_run(const BanditParams& params, const ShrunkenSet& set,
                     const std::function<scalar_t(int, const vector_t&)>&
                         bandit_losses,
                     Rng rng);

/** Projection-free constrained bandit wrapper: builds the surrogate value
 *  from the queue overestimate Qhat(t) = Q(t-1) + G D and feeds it to the
 *  blocked bandit loop. Q starts at G D sqrt(T) ln T. */
struct CbcoState {
  CocoParams params;   // logV / m as in the full-information policy
  scalar_t gd = 0.0;   // G * D
  scalar_t queue = 0.0;
  scalar_t lambda_hat_last = 0.0;
  std::shared_ptr<scalar_t> lambda_cell;  // read by the block schedules
  BbcgState inner;
};

/** `value_bound_f` / `value_bound_g` bound |f_t| / |g_t| over the set;
 *  together with G they yield the surrogate sup-norm and Lipschitz schedules. */
CbcoState cbco_init(int T, scalar_t G, const DecisionSet& base,
                    scalar_t value_bound_f, scalar_t value_bound_g, Rng rng);

const vector_t& cbco_play(const CbcoState& state);

/** Feeds the bandit feedback observed at the current play; returns the next
 *  point to play. */
const vector_t& cbco_step(CbcoState& state, const BanditFeedback& fb);

}  // namespace cocokit
