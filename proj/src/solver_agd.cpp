#include <utility>

#include "pcd/errors.hpp"
#include "pcd/solver.hpp"
#include "solver_internal.hpp"

namespace pcd {

RunResult agd_solve(const Objective& obj, StepOption option,
                    const StoppingRule& stop, const SolveOptions& opts) {
  stop.validate();
  const SparseColMatrix& X = obj.data().X;
  detail::require_normalized_columns(X);

  SparsityReport local_report;
  const SparsityReport* report = opts.report;
  if (!report) {
    local_report = analyze_matrix(X, 1e-9, 10000, opts.seed);
    report = &local_report;
  }
  const double c = step_size_c(option, *report, opts.force_unconverged_rho);
  const double eta = 1.0 / (c * obj.loss().beta);
  const double thresh = obj.lambda() * eta;

  const int d = obj.d();
  const int n = obj.n();
  SolverState st = make_start_state(obj, opts.warm_start);
  std::vector<double> grad(static_cast<std::size_t>(d));
  std::vector<double> w_next(static_cast<std::size_t>(d));
  std::vector<double> u_next(static_cast<std::size_t>(d));
  std::vector<double> margins_w_next(static_cast<std::size_t>(n));

  ThreadPool pool(opts.workers);
  ThetaSchedule sched;
  detail::CheckpointRecorder recorder(obj, stop, &pool);

  RunResult res;
  res.stop_reason = StopReason::MaxIter;
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
    full_gradient(obj, st.margins_u, grad, &pool);

    pool.parallel_for(d, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t j = b; j < e; ++j) {
        const double x = st.u[static_cast<std::size_t>(j)] -
                         eta * grad[static_cast<std::size_t>(j)];
        double v;
        if (x > thresh) {
          v = x - thresh;
        } else if (x < -thresh) {
          v = x + thresh;
        } else {
          v = 0.0;
        }
        w_next[static_cast<std::size_t>(j)] = v;
      }
    });

    const double gamma = sched.gamma(static_cast<std::size_t>(s));
    const double one_minus = 1.0 - gamma;
    pool.parallel_for(d, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t j = b; j < e; ++j) {
        u_next[static_cast<std::size_t>(j)] =
            one_minus * w_next[static_cast<std::size_t>(j)] +
            gamma * st.w[static_cast<std::size_t>(j)];
      }
    });

    // Margins of the new w are recomputed from scratch (the shrink step is
    // nonlinear, there is no cheap incremental form); margins of u follow
    // by the same affine combination that formed u.
    X.multiply(w_next, margins_w_next);
    for (int i = 0; i < n; ++i) {
      st.margins_u[static_cast<std::size_t>(i)] =
          one_minus * margins_w_next[static_cast<std::size_t>(i)] +
          gamma * st.margins_w[static_cast<std::size_t>(i)];
    }
    std::swap(st.margins_w, margins_w_next);
    std::swap(st.w, w_next);
    std::swap(st.u, u_next);
    st.t = s + 1;

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
