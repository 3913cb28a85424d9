#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "pcd/errors.hpp"
#include "pcd/solver.hpp"
#include "solver_internal.hpp"

namespace pcd {

void shotgun_step(SolverState& state, const Objective& obj,
                  std::span<const int> subset, ThreadPool* pool) {
  const SparseColMatrix& X = obj.data().X;
  const double inv_beta = 1.0 / obj.loss().beta;
  const std::int64_t P = static_cast<std::int64_t>(subset.size());

  // Gather all sampled gradient coordinates at the current iterate before
  // touching anything, then apply the updates; the sampled coordinates are
  // distinct so the writes are disjoint.
  std::vector<double> delta(static_cast<std::size_t>(P));
  auto gather = [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t k = b; k < e; ++k) {
      const int j = subset[static_cast<std::size_t>(k)];
      delta[static_cast<std::size_t>(k)] =
          -inv_beta * gradient_coordinate(obj, j, state.margins_w);
    }
  };
  if (pool && pool->workers() > 1) {
    pool->parallel_for(P, gather);
  } else {
    gather(0, P);
  }

  for (std::int64_t k = 0; k < P; ++k) {
    state.w[static_cast<std::size_t>(subset[static_cast<std::size_t>(k)])] +=
        delta[static_cast<std::size_t>(k)];
  }
  // Margin cache follows the touched columns in ascending order; columns can
  // share rows, so this scatter stays sequential.
  for (std::int64_t k = 0; k < P; ++k) {
    const int j = subset[static_cast<std::size_t>(k)];
    const double dj = delta[static_cast<std::size_t>(k)];
    for (std::int64_t kk = X.col_ptr[static_cast<std::size_t>(j)];
         kk < X.col_ptr[static_cast<std::size_t>(j) + 1]; ++kk) {
      state.margins_w[static_cast<std::size_t>(X.row_idx[static_cast<std::size_t>(kk)])] +=
          dj * X.values[static_cast<std::size_t>(kk)];
    }
  }
  state.t += 1;
}

RunResult shotgun_solve(const Objective& obj, int P, const StoppingRule& stop,
                        const SolveOptions& opts, Sampling sampling) {
  stop.validate();
  if (obj.lambda() != 0.0) {
    throw ValidationError("stochastic coordinate solvers require lambda = 0");
  }
  const SparseColMatrix& X = obj.data().X;
  detail::require_normalized_columns(X);
  const int d = obj.d();

  SubsetSampler sampler(d, P, sampling, opts.seed);

  RunResult res;
  res.stop_reason = StopReason::MaxIter;

  SparsityReport local_report;
  const SparsityReport* report = opts.report;
  if (!report) {
    local_report = analyze_matrix(X, 1e-9, 10000, opts.seed);
    report = &local_report;
  }
  const double sigma = interference_sigma(P, d, report->rho, sampling);
  if (0.5 * (1.0 + sigma) >= 1.0) {
    std::ostringstream msg;
    msg << "P = " << P << " gives sigma = " << sigma
        << "; the step condition (1/2)(1 + sigma) < 1 fails, convergence is "
           "not guaranteed";
    res.warnings.push_back(msg.str());
  }

  SolverState st = make_start_state(obj, opts.warm_start);
  ThreadPool pool(opts.workers);
  detail::CheckpointRecorder recorder(obj, stop, &pool);

  if (opts.iterate_log) opts.iterate_log->push_back(st.w);
  if (auto reason = recorder.record(1, st.w, st.margins_w)) {
    res.stop_reason = *reason;
    res.w_final = std::move(st.w);
    res.trace = recorder.take_trace();
    res.iterations = 0;
    return res;
  }

  std::int64_t s = 0;
  for (s = 1; s <= stop.max_iter; ++s) {
    shotgun_step(st, obj, sampler.next(), &pool);
    if (s % opts.margin_refresh_every == 0) {
      X.multiply(st.w, st.margins_w);
    }
    if (s % stop.checkpoint_every == 0 || s == stop.max_iter) {
      if (opts.iterate_log) opts.iterate_log->push_back(st.w);
      if (auto reason = recorder.record(st.t, st.w, st.margins_w)) {
        res.stop_reason = *reason;
        break;
      }
    }
  }

  res.iterations = std::min(s, stop.max_iter);
  res.w_final = std::move(st.w);
  res.trace = recorder.take_trace();
  return res;
}

}  // namespace pcd
