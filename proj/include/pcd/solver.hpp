#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcd/loss.hpp"
#include "pcd/rng.hpp"
#include "pcd/schedule.hpp"
#include "pcd/trace.hpp"

namespace pcd {

// Stopping is evaluated at checkpoints (every checkpoint_every iterates,
// plus the final one).  objective_tol compares successive checkpoint
// objectives relatively; grad_norm_tol tests ||grad f(w_t)||_inf and is
// meaningful on lambda = 0 paths only.  A tolerance of 0 disables that
// rule.
struct StoppingRule {
  std::int64_t max_iter = 1000;
  double objective_tol = 0.0;
  double grad_norm_tol = 0.0;
  std::int64_t checkpoint_every = 1;

  void validate() const;
};

enum class StopReason { MaxIter, ObjectiveTol, GradNormTol };

// w_final lives in the feature space of the objective's dataset; the
// solve_problem pipeline rescales it to the original space when it
// normalized the data itself.  iterations counts update steps taken, so the
// final iterate is w_{iterations+1} and the trace's last row carries that
// index.
struct RunResult {
  std::vector<double> w_final;
  Trace trace;
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::MaxIter;
  std::vector<std::string> warnings;
  std::vector<std::int64_t> touch_counts;  // per iteration, implicit mode only
};

struct SolveOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<double> warm_start;          // empty means zeros
  bool force_unconverged_rho = false;
  const SparsityReport* report = nullptr;  // computed on demand when null
  std::int64_t margin_refresh_every = 1000;
  bool record_touch_counts = false;
  // When set, receives a copy of w_t at every checkpoint (same cadence as
  // the trace), so trajectories can be compared across solver variants.
  std::vector<std::vector<double>>* iterate_log = nullptr;
};

// Soft threshold: sign(w_j) * max(|w_j| - a, 0).  a = 0 is the identity.
void shrink_inplace(std::span<double> w, double a);
std::vector<double> shrink(std::span<const double> w, double a);

// Full-update accelerated proximal solver:
//   w_{t+1} = shrink(u_t - eta * grad f(u_t), lambda * eta),  eta = 1/(c beta)
//   u_{t+1} = (1 - gamma_t) w_{t+1} + gamma_t w_t
// with c chosen by `option` from the sparsity report.  Requires normalized
// columns.
RunResult agd_solve(const Objective& obj, StepOption option,
                    const StoppingRule& stop, const SolveOptions& opts = {});

// Uniformly random, strictly sorted coordinate subsets.  UniformSubset
// draws a uniform P-subset of [0, d) by partial Fisher-Yates;
// BlockPartition requires P | d, splits [0, d) into P contiguous blocks and
// draws one index per block.
class SubsetSampler {
 public:
  SubsetSampler(int d, int P, Sampling sampling, std::uint64_t seed);
  std::span<const int> next();

 private:
  int d_, P_;
  Sampling sampling_;
  Rng rng_;
  std::vector<int> perm_;    // stays a permutation of [0, d) between draws
  std::vector<int> subset_;
};

std::vector<int> sample_subset(int d, int P, Sampling sampling, Rng& rng);

// Baseline stochastic coordinate descent with fixed step 1/beta on P
// coordinates per iteration; unregularized objectives only.
RunResult shotgun_solve(const Objective& obj, int P, const StoppingRule& stop,
                        const SolveOptions& opts = {},
                        Sampling sampling = Sampling::UniformSubset);

// Explicit iterate pair plus cached margins Xw and Xu.  Margins are updated
// incrementally from sampled-column deltas and the same affine combination
// that forms u, and refreshed from scratch every margin_refresh_every
// iterations to cap drift.
struct SolverState {
  std::int64_t t = 1;
  std::vector<double> w, u;
  std::vector<double> margins_w, margins_u;
};

SolverState make_start_state(const Objective& obj,
                             std::span<const double> w1 = {});

// One step of the baseline on a given subset (exposed for tests).
void shotgun_step(SolverState& state, const Objective& obj,
                  std::span<const int> subset, ThreadPool* pool = nullptr);

// One accelerated step on a given subset:
//   w_{t+1,j} = u_{t,j} - (eta/beta) grad f(u_t)_j  for j in the subset,
//   w_{t+1,j} = u_{t,j}                             bitwise, elsewhere,
//   u_{t+1}   = (1-gamma_t) w_{t+1} + gamma_t w_t + c_t (u_t - w_{t+1}).
void accel_shotgun_step(SolverState& state, const Objective& obj,
                        const ShotgunParams& params, const ThetaSchedule& sched,
                        std::span<const int> subset, ThreadPool* pool = nullptr);

enum class ShotgunMode { Naive, Implicit };

// Accelerated stochastic solver.  Naive mode keeps w and u explicitly and
// pays O(d) per iteration for the u update; Implicit mode represents both
// as combinations of two base vectors and touches only sampled coordinates.
// Both modes consume the subset stream identically, so a fixed seed yields
// the same subsets and iterates agreeing to rounding drift.
RunResult accel_shotgun_solve(const Objective& obj, const ShotgunParams& params,
                              const StoppingRule& stop, ShotgunMode mode,
                              const SolveOptions& opts = {});

// Implicit representation
//   w = a_w p + b_w q,   u = a_u p + b_u q,
// margins kept for the base vectors (mp = Xp, mq = Xq).  A step rewrites
// the coefficients and folds the sparse update into p and q by solving a
// 2x2 system, so only sampled coordinates are touched.  The determinant of
// the coefficient matrix contracts by |gamma_t| < 1 each step; when it
// falls below 1e-6, or a nonzero coefficient leaves [1e-12, 1e12], the
// state re-materializes (p <- w, q <- u, coefficients to identity), which
// keeps the cancellation error of materialized iterates near 1e-10.
struct ImplicitState {
  std::int64_t t = 1;
  std::vector<double> p, q;
  std::vector<double> mp, mq;
  double a_w = 1.0, b_w = 0.0, a_u = 1.0, b_u = 0.0;
  bool collapsed = true;  // w and u are the same vector (start / fixed point)
  std::int64_t touches = 0;

  void materialize(std::vector<double>& w, std::vector<double>& u) const;
  void materialize_margins(std::vector<double>& mw, std::vector<double>& mu) const;
  double det() const { return a_w * b_u - b_w * a_u; }
};

ImplicitState make_implicit_start(const Objective& obj,
                                  std::span<const double> w1 = {});

void accel_shotgun_step_implicit(ImplicitState& state, const Objective& obj,
                                 const ShotgunParams& params,
                                 const ThetaSchedule& sched,
                                 std::span<const int> subset);

}  // namespace pcd
