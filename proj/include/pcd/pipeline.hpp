#pragma once

#include <cstdint>
#include <optional>

#include "pcd/dataset.hpp"
#include "pcd/solver.hpp"

namespace pcd {

// Agd1/Agd2/Agd3 are the full-update solver with c = rho, kappa, kappa_bar
// respectively; Shotgun is the baseline coordinate method; AccelShotgun the
// accelerated one.
enum class Algorithm { Agd1, Agd2, Agd3, Shotgun, AccelShotgun };

struct ProblemConfig {
  Algorithm algorithm = Algorithm::Agd1;
  LossKind loss = LossKind::Square;
  double lambda = 0.0;
  int P = 0;                  // coordinate methods; 0 resolves to p_star
  std::optional<double> eta;  // AccelShotgun; nullopt resolves to eta_star
  StepOption c_option = StepOption::Rho;
  Sampling sampling = Sampling::UniformSubset;
  ShotgunMode mode = ShotgunMode::Implicit;
  StoppingRule stop;
  std::uint64_t seed = 0;
  int workers = 1;
  bool force_unconverged_rho = false;
  ZeroColumnPolicy zero_columns = ZeroColumnPolicy::Error;

  void validate() const;
};

// What "auto" settings resolved to, echoed into summaries so a reader can
// recompute them from the report.
struct ResolvedParams {
  double c = 0.0;  // step-size quantity; feeds sigma for AccelShotgun
  int P = 0;
  double eta = 0.0;
  double sigma = 0.0;
  bool eta_auto = false;
  bool p_auto = false;
};

struct SolveOutcome {
  RunResult result;  // w_final mapped back to the original feature space
  SparsityReport report;
  ResolvedParams resolved;
  bool normalized_in_process = false;
  std::vector<int> dropped_columns;
};

// normalize -> solve -> unscale.  Columns dropped under
// ZeroColumnPolicy::Drop come back as zero coefficients, so w_final always
// has the original dimension.
SolveOutcome solve_problem(const Dataset& raw, const ProblemConfig& cfg);

}  // namespace pcd
