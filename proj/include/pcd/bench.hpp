#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcd/loss.hpp"
#include "pcd/solver.hpp"

namespace pcd {

// Reference optimum for suboptimality measurements: a long full-update run
// with c = rho, stopped by ||grad f||_inf <= grad_tol (meaningful for
// lambda = 0) or the iteration budget.
struct ReferenceSolution {
  double f_star = 0.0;
  std::vector<double> w_star;  // in the objective's feature space
  double r2_from_zero = 0.0;   // ||w*||^2, the R^2 of a zero start
  std::int64_t iterations = 0;
};

ReferenceSolution compute_reference(const Objective& obj,
                                    const SparsityReport& report,
                                    std::int64_t max_iter = 1000000,
                                    double grad_tol = 1e-12, int workers = 1);

// Least-squares slope of ln(suboptimality) against ln(t) over checkpoints
// with t_min <= t <= t_max; rows with non-positive suboptimality (at or
// below the reference accuracy) are skipped.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

SlopeFit fit_loglog_slope(std::span<const std::int64_t> iters,
                          std::span<const double> suboptimality,
                          std::int64_t t_min, std::int64_t t_max);

// Pointwise mean of F(w_t) - f_star across same-grid traces (the common
// prefix of iterate indices).  Returns the grid and the means.
struct MeanCurve {
  std::vector<std::int64_t> iters;
  std::vector<double> mean_suboptimality;
};

MeanCurve mean_suboptimality(std::span<const Trace> traces, double f_star);

}  // namespace pcd
