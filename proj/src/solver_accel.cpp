#include <algorithm>
#include <cmath>
#include <utility>

#include "pcd/errors.hpp"
#include "pcd/solver.hpp"
#include "solver_internal.hpp"

namespace pcd {

namespace {

// delta_k = -(eta/beta) * grad f(u)_k for each sampled coordinate, with the
// gradient taken from the cached u-margins.
std::vector<double> gather_deltas(const Objective& obj,
                                  std::span<const double> margins_u,
                                  std::span<const int> subset, double step,
                                  ThreadPool* pool) {
  const std::int64_t P = static_cast<std::int64_t>(subset.size());
  std::vector<double> delta(static_cast<std::size_t>(P));
  auto gather = [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t k = b; k < e; ++k) {
      const int j = subset[static_cast<std::size_t>(k)];
      delta[static_cast<std::size_t>(k)] =
          -step * gradient_coordinate(obj, j, margins_u);
    }
  };
  if (pool && pool->workers() > 1) {
    pool->parallel_for(P, gather);
  } else {
    gather(0, P);
  }
  return delta;
}

}  // namespace

void accel_shotgun_step(SolverState& state, const Objective& obj,
                        const ShotgunParams& params, const ThetaSchedule& sched,
                        std::span<const int> subset, ThreadPool* pool) {
  const SparseColMatrix& X = obj.data().X;
  const int d = obj.d();
  const int n = obj.n();
  const double gamma = sched.gamma(static_cast<std::size_t>(state.t));
  const double one_minus = 1.0 - gamma;
  const double c = step_back_coefficient(sched, static_cast<std::size_t>(state.t),
                                         d, params);
  const double step = params.eta / obj.loss().beta;

  std::vector<double> delta = gather_deltas(obj, state.margins_u, subset, step, pool);

  // New margins of w first: the old u-margins plus the sampled column
  // contributions, accumulated in ascending column order.
  std::vector<double> mw_next(state.margins_u.begin(), state.margins_u.end());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const int j = subset[k];
    const double dj = delta[k];
    for (std::int64_t kk = X.col_ptr[static_cast<std::size_t>(j)];
         kk < X.col_ptr[static_cast<std::size_t>(j) + 1]; ++kk) {
      mw_next[static_cast<std::size_t>(X.row_idx[static_cast<std::size_t>(kk)])] +=
          dj * X.values[static_cast<std::size_t>(kk)];
    }
  }

  // Coordinates outside the subset take w_{t+1,j} = u_{t,j} as a plain copy.
  // The u update runs over every coordinate; that O(d) sweep is what the
  // implicit mode exists to avoid.
  auto update_coords = [&](std::int64_t b, std::int64_t e) {
    std::size_t k = static_cast<std::size_t>(
        std::lower_bound(subset.begin(), subset.end(), static_cast<int>(b)) -
        subset.begin());
    for (std::int64_t j = b; j < e; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      double wn = state.u[sj];
      if (k < subset.size() && subset[k] == j) {
        wn += delta[k];
        ++k;
      }
      const double un =
          one_minus * wn + gamma * state.w[sj] + c * (state.u[sj] - wn);
      state.w[sj] = wn;
      state.u[sj] = un;
    }
  };
  auto update_margins = [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const std::size_t si = static_cast<std::size_t>(i);
      const double mwn = mw_next[si];
      const double mun = one_minus * mwn + gamma * state.margins_w[si] +
                         c * (state.margins_u[si] - mwn);
      state.margins_w[si] = mwn;
      state.margins_u[si] = mun;
    }
  };
  if (pool && pool->workers() > 1) {
    pool->parallel_for(d, update_coords);
    pool->parallel_for(n, update_margins);
  } else {
    update_coords(0, d);
    update_margins(0, n);
  }
  state.t += 1;
}

void ImplicitState::materialize(std::vector<double>& w,
                                std::vector<double>& u) const {
  const std::size_t d = p.size();
  w.resize(d);
  u.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    w[j] = a_w * p[j] + b_w * q[j];
    u[j] = a_u * p[j] + b_u * q[j];
  }
}

void ImplicitState::materialize_margins(std::vector<double>& mw,
                                        std::vector<double>& mu) const {
  const std::size_t n = mp.size();
  mw.resize(n);
  mu.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mw[i] = a_w * mp[i] + b_w * mq[i];
    mu[i] = a_u * mp[i] + b_u * mq[i];
  }
}

ImplicitState make_implicit_start(const Objective& obj,
                                  std::span<const double> w1) {
  SolverState st = make_start_state(obj, w1);
  ImplicitState ist;
  ist.t = 1;
  ist.p = st.w;
  ist.q = st.w;
  ist.mp = st.margins_w;
  ist.mq = st.margins_w;
  // w = u = p, q holds the same content; the coefficient matrix is singular
  // until the first step installs independent rows.
  ist.a_w = 1.0;
  ist.b_w = 0.0;
  ist.a_u = 1.0;
  ist.b_u = 0.0;
  ist.collapsed = true;
  return ist;
}

namespace {

constexpr double kDetFloor = 1e-6;
constexpr double kCoefLo = 1e-12;
constexpr double kCoefHi = 1e12;

bool coef_out_of_band(double x) {
  const double a = std::fabs(x);
  return a != 0.0 && (a < kCoefLo || a > kCoefHi);
}

// p <- w, q <- u, coefficients back to the identity, margins recomputed from
// scratch.  Runs rarely: the determinant contracts by |gamma_t| < 1 per
// step, so between resets it takes roughly a hundredfold increase in t to
// fall from 1 back to the floor.
void reset_implicit(ImplicitState& st, const Objective& obj) {
  std::vector<double> w, u;
  st.materialize(w, u);
  st.p = std::move(w);
  st.q = std::move(u);
  st.a_w = 1.0;
  st.b_w = 0.0;
  st.a_u = 0.0;
  st.b_u = 1.0;
  st.collapsed = false;
  const SparseColMatrix& X = obj.data().X;
  X.multiply(st.p, st.mp);
  X.multiply(st.q, st.mq);
  st.touches += 2 * static_cast<std::int64_t>(st.p.size()) + 2 * X.nnz();
}

}  // namespace

void accel_shotgun_step_implicit(ImplicitState& st, const Objective& obj,
                                 const ShotgunParams& params,
                                 const ThetaSchedule& sched,
                                 std::span<const int> subset) {
  const SparseColMatrix& X = obj.data().X;
  const std::vector<double>& y = obj.data().y;
  const LossKind kind = obj.loss().kind;
  const double gamma = sched.gamma(static_cast<std::size_t>(st.t));
  const double c = step_back_coefficient(sched, static_cast<std::size_t>(st.t),
                                         obj.d(), params);
  // u_{t+1} = (1-gamma) u_t + gamma w_t + e * delta with e = 1 - gamma - c,
  // obtained by substituting w_{t+1} = u_t + delta into the update line.
  const double e = 1.0 - gamma - c;
  const double step = params.eta / obj.loss().beta;

  std::vector<double> delta(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const int j = subset[k];
    double g = 0.0;
    for (std::int64_t kk = X.col_ptr[static_cast<std::size_t>(j)];
         kk < X.col_ptr[static_cast<std::size_t>(j) + 1]; ++kk) {
      const std::size_t i = static_cast<std::size_t>(
          X.row_idx[static_cast<std::size_t>(kk)]);
      const double mu_i =
          st.collapsed ? st.mp[i] : st.a_u * st.mp[i] + st.b_u * st.mq[i];
      g += X.values[static_cast<std::size_t>(kk)] * loss_deriv(kind, mu_i, y[i]);
    }
    delta[k] = -step * g;
    st.touches += X.col_ptr[static_cast<std::size_t>(j) + 1] -
                  X.col_ptr[static_cast<std::size_t>(j)];
  }

  if (st.collapsed) {
    // w = u = p (and q == p), so w_{t+1} = p + delta and
    // u_{t+1} = p + e*delta; store them directly in the two bases.
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const int j = subset[k];
      const double dp = delta[k];
      const double dq = e * delta[k];
      st.p[static_cast<std::size_t>(j)] += dp;
      st.q[static_cast<std::size_t>(j)] += dq;
      st.touches += 2;
      for (std::int64_t kk = X.col_ptr[static_cast<std::size_t>(j)];
           kk < X.col_ptr[static_cast<std::size_t>(j) + 1]; ++kk) {
        const std::size_t i = static_cast<std::size_t>(
            X.row_idx[static_cast<std::size_t>(kk)]);
        const double v = X.values[static_cast<std::size_t>(kk)];
        st.mp[i] += dp * v;
        st.mq[i] += dq * v;
        st.touches += 2;
      }
    }
    st.a_w = 1.0;
    st.b_w = 0.0;
    st.a_u = 0.0;
    st.b_u = 1.0;
    st.collapsed = false;
  } else {
    // Coefficient rows after the step, before folding in delta:
    //   w_{t+1} row is the old u row; u_{t+1} row is their mix.
    const double aw2 = st.a_u;
    const double bw2 = st.b_u;
    const double au2 = (1.0 - gamma) * st.a_u + gamma * st.a_w;
    const double bu2 = (1.0 - gamma) * st.b_u + gamma * st.b_w;
    // Fold the sparse update into the bases: solve the 2x2 system so that w
    // gains exactly delta and u gains e*delta on the sampled coordinates.
    const double det = aw2 * bu2 - bw2 * au2;
    const double sp = (bu2 - bw2 * e) / det;
    const double sq = (aw2 * e - au2) / det;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const int j = subset[k];
      const double dp = sp * delta[k];
      const double dq = sq * delta[k];
      st.p[static_cast<std::size_t>(j)] += dp;
      st.q[static_cast<std::size_t>(j)] += dq;
      st.touches += 2;
      for (std::int64_t kk = X.col_ptr[static_cast<std::size_t>(j)];
           kk < X.col_ptr[static_cast<std::size_t>(j) + 1]; ++kk) {
        const std::size_t i = static_cast<std::size_t>(
            X.row_idx[static_cast<std::size_t>(kk)]);
        const double v = X.values[static_cast<std::size_t>(kk)];
        st.mp[i] += dp * v;
        st.mq[i] += dq * v;
        st.touches += 2;
      }
    }
    st.a_w = aw2;
    st.b_w = bw2;
    st.a_u = au2;
    st.b_u = bu2;
  }
  st.t += 1;

  if (std::fabs(st.det()) < kDetFloor || coef_out_of_band(st.a_w) ||
      coef_out_of_band(st.b_w) || coef_out_of_band(st.a_u) ||
      coef_out_of_band(st.b_u)) {
    reset_implicit(st, obj);
  }
}

namespace {

RunResult accel_shotgun_solve_naive(const Objective& obj,
                                    const ShotgunParams& params,
                                    const StoppingRule& stop,
                                    const SolveOptions& opts) {
  const SparseColMatrix& X = obj.data().X;
  SolverState st = make_start_state(obj, opts.warm_start);
  SubsetSampler sampler(obj.d(), params.P, params.sampling, opts.seed);
  ThetaSchedule sched;
  ThreadPool pool(opts.workers);
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
    accel_shotgun_step(st, obj, params, sched, sampler.next(), &pool);
    if (s % opts.margin_refresh_every == 0) {
      X.multiply(st.w, st.margins_w);
      X.multiply(st.u, st.margins_u);
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

RunResult accel_shotgun_solve_implicit(const Objective& obj,
                                       const ShotgunParams& params,
                                       const StoppingRule& stop,
                                       const SolveOptions& opts) {
  const SparseColMatrix& X = obj.data().X;
  ImplicitState ist = make_implicit_start(obj, opts.warm_start);
  SubsetSampler sampler(obj.d(), params.P, params.sampling, opts.seed);
  ThetaSchedule sched;
  ThreadPool pool(opts.workers);
  detail::CheckpointRecorder recorder(obj, stop, &pool);

  std::vector<double> w_mat, u_mat, mw_mat, mu_mat;

  RunResult res;
  res.stop_reason = StopReason::MaxIter;
  ist.materialize(w_mat, u_mat);
  ist.materialize_margins(mw_mat, mu_mat);
  if (opts.iterate_log) opts.iterate_log->push_back(w_mat);
  if (auto reason = recorder.record(1, w_mat, mw_mat)) {
    res.stop_reason = *reason;
    res.w_final = std::move(w_mat);
    res.trace = recorder.take_trace();
    res.iterations = 0;
    return res;
  }

  std::int64_t s = 0;
  for (s = 1; s <= stop.max_iter; ++s) {
    const std::int64_t touches_before = ist.touches;
    accel_shotgun_step_implicit(ist, obj, params, sched, sampler.next());
    if (opts.record_touch_counts) {
      res.touch_counts.push_back(ist.touches - touches_before);
    }
    if (s % opts.margin_refresh_every == 0) {
      X.multiply(ist.p, ist.mp);
      X.multiply(ist.q, ist.mq);
    }
    if (s % stop.checkpoint_every == 0 || s == stop.max_iter) {
      ist.materialize(w_mat, u_mat);
      ist.materialize_margins(mw_mat, mu_mat);
      if (opts.iterate_log) opts.iterate_log->push_back(w_mat);
      if (auto reason = recorder.record(ist.t, w_mat, mw_mat)) {
        res.stop_reason = *reason;
        break;
      }
    }
  }

  res.iterations = std::min(s, stop.max_iter);
  ist.materialize(w_mat, u_mat);
  res.w_final = std::move(w_mat);
  res.trace = recorder.take_trace();
  return res;
}

}  // namespace

RunResult accel_shotgun_solve(const Objective& obj, const ShotgunParams& params,
                              const StoppingRule& stop, ShotgunMode mode,
                              const SolveOptions& opts) {
  stop.validate();
  params.validate(obj.d());
  if (obj.lambda() != 0.0) {
    throw ValidationError(
        "accelerated shotgun assumes an unregularized objective; it cannot "
        "solve lambda > 0 problems");
  }
  detail::require_normalized_columns(obj.data().X);
  if (mode == ShotgunMode::Naive) {
    return accel_shotgun_solve_naive(obj, params, stop, opts);
  }
  return accel_shotgun_solve_implicit(obj, params, stop, opts);
}

}  // namespace pcd
