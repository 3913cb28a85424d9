#pragma once

#include <chrono>
#include <optional>

#include "pcd/loss.hpp"
#include "pcd/solver.hpp"

namespace pcd::detail {

// Solvers assume unit-norm columns: every coordinate step size and every
// sparsity quantity is derived under that scaling.
void require_normalized_columns(const SparseColMatrix& X);

inline std::int64_t elapsed_ns_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Checkpoint bookkeeping shared by the solve loops: records trace rows,
// enforces finiteness, and evaluates the stopping rules (gradient rule
// first, then the objective rule; max_iter is the caller's loop bound).
class CheckpointRecorder {
 public:
  CheckpointRecorder(const Objective& obj, const StoppingRule& stop,
                     ThreadPool* pool)
      : obj_(obj), stop_(stop), pool_(pool),
        start_(std::chrono::steady_clock::now()) {}

  // w and margins describe the iterate with index t.  Returns a stop reason
  // when a tolerance rule fires.
  std::optional<StopReason> record(std::int64_t t, std::span<const double> w,
                                   std::span<const double> margins);

  Trace take_trace() { return std::move(trace_); }

 private:
  const Objective& obj_;
  const StoppingRule& stop_;
  ThreadPool* pool_;
  std::chrono::steady_clock::time_point start_;
  Trace trace_;
  double prev_objective_ = 0.0;
  bool have_prev_ = false;
  std::vector<double> grad_scratch_;
};

}  // namespace pcd::detail
