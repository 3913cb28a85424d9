#include "pcd/schedule.hpp"

#include <cmath>
#include <string>

#include "pcd/errors.hpp"

namespace pcd {

long double ThetaSchedule::theta_raw(std::size_t t) const {
  std::lock_guard<std::mutex> lk(m_);
  if (cache_.empty()) {
    cache_.push_back(0.0L);  // theta_0
    cache_.push_back(1.0L);  // theta_1
  }
  while (cache_.size() <= t) {
    const long double prev = cache_.back();
    cache_.push_back(0.5L * (1.0L + std::sqrt(1.0L + 4.0L * prev * prev)));
  }
  return cache_[t];
}

double ThetaSchedule::theta(std::size_t t) const {
  return static_cast<double>(theta_raw(t));
}

double ThetaSchedule::gamma(std::size_t t) const {
  if (t < 1) throw ValidationError("gamma is defined for t >= 1");
  return static_cast<double>((1.0L - theta_raw(t)) / theta_raw(t + 1));
}

double step_size_c(StepOption option, const SparsityReport& report,
                   bool force_unconverged_rho) {
  switch (option) {
    case StepOption::Kappa:
      if (report.kappa < 1) {
        throw ValidationError("kappa must be at least 1 for a step size");
      }
      return static_cast<double>(report.kappa);
    case StepOption::KappaBar:
      if (report.kappa_bar <= 0.0) {
        throw ValidationError("kappa_bar must be positive for a step size");
      }
      return report.kappa_bar;
    case StepOption::Rho:
      if (!report.rho_converged && !force_unconverged_rho) {
        throw UnconvergedRhoError(
            "spectral radius estimate did not converge; rerun with more "
            "iterations or force it");
      }
      if (report.rho <= 0.0) {
        throw ValidationError("rho must be positive for a step size");
      }
      return report.rho;
  }
  throw ValidationError("unknown step option");
}

double interference_sigma(int P, int d, double rho, Sampling sampling) {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (P < 1 || P > d) throw ValidationError("P must lie in [1, d]");
  if (!std::isfinite(rho) || rho < 0.0) {
    throw ValidationError("rho must be finite and non-negative");
  }
  if (sampling == Sampling::UniformSubset) {
    if (P == 1 || d == 1) return 0.0;  // single coordinate, no interference
    // Both formulas reduce to rho - 1 at P = d.  Taking that branch directly
    // matters: rho - 1 is exact for rho >= 1 and 1 + (rho - 1) rounds back
    // to rho, so eta* = 1/(1 + sigma) is then bitwise 1/rho and the full
    // sampling configuration degenerates to the full-update step exactly.
    if (P == d) return rho - 1.0;
    return (static_cast<double>(P) - 1.0) * (rho - 1.0) /
           (static_cast<double>(d) - 1.0);
  }
  if (P == d) return rho - 1.0;
  return (rho - 1.0) * static_cast<double>(P) / static_cast<double>(d);
}

double eta_star(double sigma) {
  if (!std::isfinite(sigma) || sigma <= -1.0) {
    throw ValidationError("sigma must be finite and > -1");
  }
  return 1.0 / (1.0 + sigma);
}

int p_star(int d, double rho) {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (!std::isfinite(rho) || rho < 0.0) {
    throw ValidationError("rho must be finite and non-negative");
  }
  if (rho <= 1.0) return d;
  const double raw =
      (2.0 / 3.0) * ((static_cast<double>(d) - 1.0) / (rho - 1.0) + 1.0);
  double rounded = std::floor(raw + 0.5);  // round half up
  if (rounded < 1.0) rounded = 1.0;
  if (rounded > static_cast<double>(d)) rounded = static_cast<double>(d);
  return static_cast<int>(rounded);
}

ShotgunParams ShotgunParams::resolve(int P, int d, double rho, double eta,
                                     Sampling sampling, StepOption c_option) {
  ShotgunParams p;
  p.P = P;
  p.sampling = sampling;
  p.c_option = c_option;
  p.sigma = interference_sigma(P, d, rho, sampling);
  p.eta = eta;
  p.step_slack = 1.0 - (eta / 2.0) * (1.0 + p.sigma);
  p.validate(d);
  return p;
}

ShotgunParams ShotgunParams::resolve_optimal_eta(int P, int d, double rho,
                                                 Sampling sampling,
                                                 StepOption c_option) {
  ShotgunParams p;
  p.P = P;
  p.sampling = sampling;
  p.c_option = c_option;
  p.sigma = interference_sigma(P, d, rho, sampling);
  // eta = 1/(1 + sigma) makes (eta/2)(1 + sigma) equal one half by algebra;
  // carrying the exact 0.5 lets the P = d, eta = 1/rho configuration cancel
  // to a step-back coefficient of exactly zero.
  p.eta = eta_star(p.sigma);
  p.step_slack = 0.5;
  p.eta_auto = true;
  p.validate(d);
  return p;
}

void ShotgunParams::validate(int d) const {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (P < 1 || P > d) throw ValidationError("P must lie in [1, d]");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValidationError("eta must be positive and finite");
  }
  if (lambda != 0.0) {
    throw ValidationError("accelerated stochastic updates require lambda == 0");
  }
  if (!(step_slack > 0.0)) {
    throw ValidationError(
        "step hypothesis violated: need (eta/2)(1 + sigma) < 1, got slack " +
        std::to_string(step_slack));
  }
  if (sampling == Sampling::BlockPartition && d % P != 0) {
    throw ValidationError("block partition sampling requires P to divide d");
  }
}

double step_back_coefficient(const ThetaSchedule& sched, std::size_t t, int P,
                             int d, double eta, double sigma) {
  const double slack = 1.0 - (eta / 2.0) * (1.0 + sigma);
  const double k = 1.0 - (2.0 * static_cast<double>(P) / static_cast<double>(d)) * slack;
  return (sched.theta(t) / sched.theta(t + 1)) * k;
}

double step_back_coefficient(const ThetaSchedule& sched, std::size_t t, int d,
                             const ShotgunParams& params) {
  const double k = 1.0 - (2.0 * static_cast<double>(params.P) /
                          static_cast<double>(d)) *
                             params.step_slack;
  return (sched.theta(t) / sched.theta(t + 1)) * k;
}

namespace {

void check_bound_args(double beta, double r2) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  if (r2 < 0.0 || !std::isfinite(r2)) {
    throw ValidationError("squared radius must be finite and >= 0");
  }
}

}  // namespace

double theorem1_bound(double c, double beta, double r2, std::int64_t t) {
  check_bound_args(beta, r2);
  if (!(c > 0.0)) throw ValidationError("c must be positive");
  if (t < 1) throw ValidationError("the bound needs t >= 1");
  const double td = static_cast<double>(t);
  return 2.0 * c * beta * r2 / (td * td);
}

double theorem2_bound(double beta, int d, int P, double eta, double sigma,
                      double r2, std::int64_t t) {
  const double slack = 1.0 - (eta / 2.0) * (1.0 + sigma);
  check_bound_args(beta, r2);
  if (P < 1 || d < 1) throw ValidationError("P and d must be at least 1");
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (!(slack > 0.0)) {
    throw ValidationError("step hypothesis violated: (eta/2)(1 + sigma) >= 1");
  }
  if (t < 2) throw ValidationError("the expectation bound needs t > 1");
  const double td = static_cast<double>(t);
  const double dd = static_cast<double>(d);
  const double pd = static_cast<double>(P);
  return beta * dd * dd * r2 / (td * td * pd * pd * eta * slack);
}

double theorem2_bound(double beta, int d, const ShotgunParams& params,
                      double r2, std::int64_t t) {
  check_bound_args(beta, r2);
  if (t < 2) throw ValidationError("the expectation bound needs t > 1");
  const double td = static_cast<double>(t);
  const double dd = static_cast<double>(d);
  const double pd = static_cast<double>(params.P);
  return beta * dd * dd * r2 /
         (td * td * pd * pd * params.eta * params.step_slack);
}

namespace {

// Smallest integer t >= t_min with k / t^2 <= eps.
std::int64_t invert_quadratic_bound(double k, double eps, std::int64_t t_min) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (k <= 0.0) return t_min;
  auto t = static_cast<std::int64_t>(std::ceil(std::sqrt(k / eps)));
  if (t < t_min) t = t_min;
  const auto value = [&](std::int64_t tt) {
    const double td = static_cast<double>(tt);
    return k / (td * td);
  };
  while (t > t_min && value(t - 1) <= eps) --t;
  while (value(t) > eps) ++t;
  return t;
}

}  // namespace

std::int64_t iterations_to_eps_theorem1(double c, double beta, double r2,
                                        double eps) {
  check_bound_args(beta, r2);
  if (!(c > 0.0)) throw ValidationError("c must be positive");
  return invert_quadratic_bound(2.0 * c * beta * r2, eps, 1);
}

std::int64_t iterations_to_eps_theorem2(double beta, int d, int P, double eta,
                                        double sigma, double r2, double eps) {
  check_bound_args(beta, r2);
  const double slack = 1.0 - (eta / 2.0) * (1.0 + sigma);
  if (P < 1 || d < 1) throw ValidationError("P and d must be at least 1");
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (!(slack > 0.0)) {
    throw ValidationError("step hypothesis violated: (eta/2)(1 + sigma) >= 1");
  }
  const double dd = static_cast<double>(d);
  const double pd = static_cast<double>(P);
  return invert_quadratic_bound(beta * dd * dd * r2 / (pd * pd * eta * slack),
                                eps, 2);
}

}  // namespace pcd
