#include <cmath>

#include "pcd/bench.hpp"
#include "pcd/errors.hpp"

namespace pcd {

ReferenceSolution compute_reference(const Objective& obj,
                                    const SparsityReport& report,
                                    std::int64_t max_iter, double grad_tol,
                                    int workers) {
  StoppingRule stop;
  stop.max_iter = max_iter;
  stop.checkpoint_every = 100;
  if (obj.lambda() == 0.0) stop.grad_norm_tol = grad_tol;

  SolveOptions opts;
  opts.workers = workers;
  opts.report = &report;

  RunResult run = agd_solve(obj, StepOption::Rho, stop, opts);

  ReferenceSolution ref;
  std::vector<double> margins(static_cast<std::size_t>(obj.n()));
  obj.data().X.multiply(run.w_final, margins);
  ref.f_star = full_value(obj, run.w_final, margins);
  ref.r2_from_zero = 0.0;
  for (double wj : run.w_final) ref.r2_from_zero += wj * wj;
  ref.w_star = std::move(run.w_final);
  ref.iterations = run.iterations;
  return ref;
}

SlopeFit fit_loglog_slope(std::span<const std::int64_t> iters,
                          std::span<const double> suboptimality,
                          std::int64_t t_min, std::int64_t t_max) {
  if (iters.size() != suboptimality.size()) {
    throw ValidationError("iteration and suboptimality lengths differ");
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < iters.size(); ++k) {
    const std::int64_t t = iters[k];
    const double s = suboptimality[k];
    if (t < t_min || t > t_max) continue;
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(s));
  }
  SlopeFit fit;
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 2) {
    throw ValidationError(
        "log-log fit needs at least two checkpoints with positive "
        "suboptimality in the window");
  }
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < fit.points; ++k) {
    mx += xs[static_cast<std::size_t>(k)];
    my += ys[static_cast<std::size_t>(k)];
  }
  mx /= fit.points;
  my /= fit.points;
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < fit.points; ++k) {
    const double dx = xs[static_cast<std::size_t>(k)] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<std::size_t>(k)] - my);
  }
  if (sxx == 0.0) {
    throw ValidationError("log-log fit needs at least two distinct iterates");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

MeanCurve mean_suboptimality(std::span<const Trace> traces, double f_star) {
  MeanCurve curve;
  if (traces.empty()) return curve;
  std::size_t rows = traces.front().size();
  for (const Trace& tr : traces) rows = std::min(rows, tr.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int64_t iter = traces.front()[r].iter;
    double acc = 0.0;
    for (const Trace& tr : traces) {
      if (tr[r].iter != iter) {
        throw ValidationError("traces disagree on checkpoint iterates");
      }
      acc += tr[r].objective - f_star;
    }
    curve.iters.push_back(iter);
    curve.mean_suboptimality.push_back(acc / static_cast<double>(traces.size()));
  }
  return curve;
}

}  // namespace pcd
