#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <vector>

#include "pcd/dataset.hpp"

namespace pcd {

// Momentum sequence theta_0 = 0, theta_{t+1} = (1 + sqrt(1 + 4 theta_t^2))/2
// and the mixing weight gamma_t = (1 - theta_t) / theta_{t+1}.  Values are
// memoized; the recurrence runs in long double so the identity
// theta_{t-1}^2 = theta_t^2 - theta_t survives out to t ~ 1e6.  Queries are
// safe from any number of threads and always return identical values.
class ThetaSchedule {
 public:
  double theta(std::size_t t) const;
  double gamma(std::size_t t) const;  // t >= 1

 private:
  long double theta_raw(std::size_t t) const;
  mutable std::mutex m_;
  mutable std::vector<long double> cache_;
};

// Which quantity plays the role of c in the step size 1/(c*beta):
// the spectral radius rho, the max row count kappa, or the weighted
// kappa_bar.  On normalized data rho <= kappa_bar <= kappa, so the choices
// trade convergence speed against the cost of the power iteration.
enum class StepOption { Rho, Kappa, KappaBar };

enum class Sampling { UniformSubset, BlockPartition };

// c for the chosen option.  StepOption::Rho on an unconverged estimate
// raises UnconvergedRhoError unless the caller forces it.
double step_size_c(StepOption option, const SparsityReport& report,
                   bool force_unconverged_rho = false);

// Interference term for P parallel coordinate updates:
//   UniformSubset:   sigma = (P - 1)(rho - 1) / (d - 1)   (0 when d == 1)
//   BlockPartition:  sigma = (rho - 1) P / d
double interference_sigma(int P, int d, double rho, Sampling sampling);

// Largest admissible step: the root of (eta/2)(1 + sigma) = 1/2.
double eta_star(double sigma);

// Parallelism that balances per-iteration progress against interference:
// round-half-up of (2/3)((d - 1)/(rho - 1) + 1), clamped to [1, d].  Every
// P is admissible when rho <= 1, so that case returns d.
int p_star(int d, double rho);

// Resolved parameters for the accelerated stochastic solver.  `step_slack`
// caches 1 - (eta/2)(1 + sigma); the convergence hypothesis is that it is
// positive.  resolve_optimal_eta sets eta = 1/(1 + sigma) and the slack to
// exactly 0.5, the algebraic value, so the degenerate full-update
// configuration (P = d, eta = 1/rho) cancels exactly instead of to within
// rounding.
struct ShotgunParams {
  int P = 1;
  double eta = 1.0;
  double sigma = 0.0;
  StepOption c_option = StepOption::Rho;
  Sampling sampling = Sampling::UniformSubset;
  double lambda = 0.0;
  double step_slack = 0.5;
  bool eta_auto = false;

  static ShotgunParams resolve(int P, int d, double rho, double eta,
                               Sampling sampling,
                               StepOption c_option = StepOption::Rho);
  static ShotgunParams resolve_optimal_eta(int P, int d, double rho,
                                           Sampling sampling,
                                           StepOption c_option = StepOption::Rho);

  void validate(int d) const;
};

// Step-back coefficient
//   c_t = (theta_t / theta_{t+1}) * (1 - (2P/d)(1 - (eta/2)(1 + sigma))).
double step_back_coefficient(const ThetaSchedule& sched, std::size_t t, int P,
                             int d, double eta, double sigma);
double step_back_coefficient(const ThetaSchedule& sched, std::size_t t, int d,
                             const ShotgunParams& params);

// Deterministic rate certificate for the full-update algorithm, valid for
// any c >= rho:  F(w_t) - F* <= 2 c beta ||w_1 - w*||^2 / t^2.  r2 is the
// squared distance from the start to a minimizer.
double theorem1_bound(double c, double beta, double r2, std::int64_t t);

// Expected-value certificate for the accelerated stochastic solver:
//   E[F(w_t)] - F* <= beta d^2 r2 / (t^2 P^2 eta (1 - (eta/2)(1 + sigma))).
double theorem2_bound(double beta, int d, int P, double eta, double sigma,
                      double r2, std::int64_t t);
double theorem2_bound(double beta, int d, const ShotgunParams& params,
                      double r2, std::int64_t t);

// Smallest t with the respective bound <= eps (exact inversion, then a
// local adjustment to absorb rounding in the square root).
std::int64_t iterations_to_eps_theorem1(double c, double beta, double r2,
                                        double eps);
std::int64_t iterations_to_eps_theorem2(double beta, int d, int P, double eta,
                                        double sigma, double r2, double eps);

}  // namespace pcd
