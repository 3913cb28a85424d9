#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace pcd {

// One checkpoint: the iterate index t (strictly increasing down a trace),
// wall time since the run started, and F(w_t).  Suboptimality is filled in
// by benchmark tooling once a reference optimum is known; the gradient
// infinity norm is recorded only when a gradient stopping rule is active.
struct TraceRow {
  std::int64_t iter = 0;
  std::int64_t elapsed_ns = 0;
  double objective = 0.0;
  std::optional<double> suboptimality;
  std::optional<double> grad_inf_norm;
};

using Trace = std::vector<TraceRow>;

// CSV with header "iter,elapsed_ns,objective,suboptimality,grad_inf_norm";
// absent optionals become empty fields.  Doubles are written with shortest
// round-trip precision, so read_trace_csv(write_trace_csv(t)) == t exactly.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace pcd
