#include <cmath>
#include <utility>

#include "pcd/errors.hpp"
#include "pcd/pipeline.hpp"

namespace pcd {

void ProblemConfig::validate() const {
  stop.validate();
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ValidationError("lambda must be finite and non-negative");
  }
  if (workers < 1) throw ValidationError("workers must be at least 1");
  if (P < 0) throw ValidationError("P must be non-negative (0 means automatic)");
  if (eta && (!std::isfinite(*eta) || *eta <= 0.0)) {
    throw ValidationError("eta must be positive and finite");
  }
  if ((algorithm == Algorithm::Shotgun || algorithm == Algorithm::AccelShotgun) &&
      lambda != 0.0) {
    throw ValidationError("coordinate algorithms require lambda = 0");
  }
}

SolveOutcome solve_problem(const Dataset& raw, const ProblemConfig& cfg) {
  cfg.validate();

  SolveOutcome out;
  Dataset ds = normalize_dataset(raw, cfg.zero_columns, &out.dropped_columns);
  out.normalized_in_process = !raw.normalized;

  out.report = analyze_matrix(ds.X, 1e-9, 10000, cfg.seed);
  const int d = ds.d();

  Objective obj(ds, LossModel::of(cfg.loss), cfg.lambda);
  SolveOptions opts;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  opts.force_unconverged_rho = cfg.force_unconverged_rho;
  opts.report = &out.report;

  switch (cfg.algorithm) {
    case Algorithm::Agd1:
    case Algorithm::Agd2:
    case Algorithm::Agd3: {
      StepOption option = StepOption::Rho;
      if (cfg.algorithm == Algorithm::Agd2) option = StepOption::Kappa;
      if (cfg.algorithm == Algorithm::Agd3) option = StepOption::KappaBar;
      out.resolved.c =
          step_size_c(option, out.report, cfg.force_unconverged_rho);
      out.resolved.P = d;
      out.resolved.eta = 1.0 / (out.resolved.c * obj.loss().beta);
      out.result = agd_solve(obj, option, cfg.stop, opts);
      break;
    }
    case Algorithm::Shotgun: {
      const int P = cfg.P == 0 ? p_star(d, out.report.rho) : cfg.P;
      out.resolved.P = P;
      out.resolved.p_auto = cfg.P == 0;
      out.resolved.eta = 1.0;
      out.resolved.sigma =
          interference_sigma(P, d, out.report.rho, cfg.sampling);
      out.result = shotgun_solve(obj, P, cfg.stop, opts, cfg.sampling);
      break;
    }
    case Algorithm::AccelShotgun: {
      const int P = cfg.P == 0 ? p_star(d, out.report.rho) : cfg.P;
      const double cq =
          step_size_c(cfg.c_option, out.report, cfg.force_unconverged_rho);
      ShotgunParams params =
          cfg.eta ? ShotgunParams::resolve(P, d, cq, *cfg.eta, cfg.sampling,
                                           cfg.c_option)
                  : ShotgunParams::resolve_optimal_eta(P, d, cq, cfg.sampling,
                                                       cfg.c_option);
      out.resolved.c = cq;
      out.resolved.P = P;
      out.resolved.p_auto = cfg.P == 0;
      out.resolved.eta = params.eta;
      out.resolved.sigma = params.sigma;
      out.resolved.eta_auto = params.eta_auto;
      out.result = accel_shotgun_solve(obj, params, cfg.stop, cfg.mode, opts);
      break;
    }
  }

  // Back to the original feature space.  Dropped columns never entered the
  // solve, so their coefficients are zero by construction.
  std::vector<double> w = std::move(out.result.w_final);
  if (ds.scales.size() == w.size()) {
    w = unscale_solution(w, ds.scales);
  }
  if (!out.dropped_columns.empty()) {
    std::vector<double> full(static_cast<std::size_t>(raw.d()), 0.0);
    std::size_t next_dropped = 0;
    std::size_t src = 0;
    for (int j = 0; j < raw.d(); ++j) {
      if (next_dropped < out.dropped_columns.size() &&
          out.dropped_columns[next_dropped] == j) {
        ++next_dropped;
        continue;
      }
      full[static_cast<std::size_t>(j)] = w[src++];
    }
    w = std::move(full);
  }
  out.result.w_final = std::move(w);
  return out;
}

}  // namespace pcd
