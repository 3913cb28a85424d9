#include <cmath>
#include <string>

#include "pcd/errors.hpp"
#include "pcd/solver.hpp"
#include "solver_internal.hpp"

namespace pcd {

void StoppingRule::validate() const {
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (checkpoint_every < 1) {
    throw ValidationError("checkpoint_every must be at least 1");
  }
  if (objective_tol < 0.0 || !std::isfinite(objective_tol)) {
    throw ValidationError("objective_tol must be finite and >= 0");
  }
  if (grad_norm_tol < 0.0 || !std::isfinite(grad_norm_tol)) {
    throw ValidationError("grad_norm_tol must be finite and >= 0");
  }
}

void shrink_inplace(std::span<double> w, double a) {
  if (a < 0.0 || !std::isfinite(a)) {
    throw ValidationError("shrinkage threshold must be finite and >= 0");
  }
  for (double& x : w) {
    if (x > a) {
      x -= a;
    } else if (x < -a) {
      x += a;
    } else {
      x = 0.0;
    }
  }
}

std::vector<double> shrink(std::span<const double> w, double a) {
  std::vector<double> out(w.begin(), w.end());
  shrink_inplace(out, a);
  return out;
}

SolverState make_start_state(const Objective& obj, std::span<const double> w1) {
  const int d = obj.d();
  SolverState st;
  st.t = 1;
  if (w1.empty()) {
    st.w.assign(static_cast<std::size_t>(d), 0.0);
  } else {
    if (w1.size() != static_cast<std::size_t>(d)) {
      throw ValidationError("warm start has wrong dimension");
    }
    st.w.assign(w1.begin(), w1.end());
  }
  st.u = st.w;
  st.margins_w.resize(static_cast<std::size_t>(obj.n()));
  obj.data().X.multiply(st.w, st.margins_w);
  st.margins_u = st.margins_w;
  return st;
}

namespace detail {

void require_normalized_columns(const SparseColMatrix& X) {
  for (int j = 0; j < X.cols; ++j) {
    if (std::abs(X.column_norm_sq(j) - 1.0) > 1e-8) {
      throw ValidationError(
          "solver requires unit-norm columns; normalize the data first "
          "(column " +
          std::to_string(j) + ")");
    }
  }
}

std::optional<StopReason> CheckpointRecorder::record(
    std::int64_t t, std::span<const double> w, std::span<const double> margins) {
  TraceRow row;
  row.iter = t;
  row.objective = full_value(obj_, w, margins, pool_);
  if (!std::isfinite(row.objective)) {
    throw NumericError("non-finite objective at iterate " + std::to_string(t) +
                       "; the iteration diverged");
  }
  std::optional<StopReason> reason;
  if (stop_.grad_norm_tol > 0.0) {
    grad_scratch_.resize(w.size());
    full_gradient(obj_, margins, grad_scratch_, pool_);
    const double g = inf_norm(grad_scratch_);
    row.grad_inf_norm = g;
    if (g <= stop_.grad_norm_tol) reason = StopReason::GradNormTol;
  }
  if (!reason && stop_.objective_tol > 0.0 && have_prev_) {
    const double diff = std::abs(prev_objective_ - row.objective);
    if (diff <= stop_.objective_tol * std::max(std::abs(prev_objective_), 1e-300)) {
      reason = StopReason::ObjectiveTol;
    }
  }
  prev_objective_ = row.objective;
  have_prev_ = true;
  row.elapsed_ns = elapsed_ns_since(start_);
  trace_.push_back(row);
  return reason;
}

}  // namespace detail
}  // namespace pcd
