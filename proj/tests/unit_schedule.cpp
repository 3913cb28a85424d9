#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "doctest.h"
#include "pcd/errors.hpp"
#include "pcd/schedule.hpp"

namespace {

pcd::SparsityReport report_with(double rho, int kappa, double kappa_bar,
                                bool converged = true) {
  pcd::SparsityReport r;
  r.n = 10;
  r.d = 10;
  r.rho = rho;
  r.kappa = kappa;
  r.kappa_bar = kappa_bar;
  r.rho_converged = converged;
  return r;
}

}  // namespace

TEST_CASE("momentum sequence start values") {
  pcd::ThetaSchedule s;
  CHECK(s.theta(0) == 0.0);
  CHECK(s.theta(1) == 1.0);
  // theta_2 = (1 + sqrt 5)/2, theta_3 = (1 + sqrt(7 + 2 sqrt 5))/2.
  CHECK(s.theta(2) == doctest::Approx(1.618033988749895).epsilon(1e-15));
  CHECK(s.theta(3) == doctest::Approx(2.193527085331054).epsilon(1e-15));
  CHECK(s.gamma(1) == 0.0);
  CHECK(s.gamma(2) == doctest::Approx(-0.28175352512532087).epsilon(1e-14));
  CHECK(s.gamma(3) == doctest::Approx(-0.434042782780302).epsilon(1e-14));
}

TEST_CASE("mixing weights are negative after the first step and bounded by one") {
  pcd::ThetaSchedule s;
  for (std::size_t t = 2; t <= 2000; ++t) {
    const double g = s.gamma(t);
    CHECK(g < 0.0);
    CHECK(g > -1.0);
  }
}

TEST_CASE("theta recurrence identity holds out to large t") {
  pcd::ThetaSchedule s;
  for (std::size_t t : {2ul, 10ul, 100ul, 10000ul, 1000000ul}) {
    const double prev = s.theta(t - 1);
    const double cur = s.theta(t);
    CHECK(prev * prev ==
          doctest::Approx(cur * cur - cur).epsilon(1e-9));
  }
}

TEST_CASE("theta queries are consistent under concurrency") {
  pcd::ThetaSchedule fresh;
  pcd::ThetaSchedule warm;
  for (std::size_t t = 0; t <= 500; ++t) warm.theta(t);

  std::vector<std::thread> threads;
  std::vector<double> results(8);
  for (int k = 0; k < 8; ++k) {
    threads.emplace_back([&fresh, &results, k] {
      double acc = 0.0;
      for (std::size_t t = 1; t <= 500; ++t) acc += fresh.gamma(t);
      results[static_cast<std::size_t>(k)] = acc;
    });
  }
  for (auto& th : threads) th.join();
  double want = 0.0;
  for (std::size_t t = 1; t <= 500; ++t) want += warm.gamma(t);
  for (double got : results) CHECK(got == want);
}

TEST_CASE("step size quantity selection") {
  const pcd::SparsityReport r = report_with(1.5, 4, 2.5);
  CHECK(pcd::step_size_c(pcd::StepOption::Rho, r) == 1.5);
  CHECK(pcd::step_size_c(pcd::StepOption::Kappa, r) == 4.0);
  CHECK(pcd::step_size_c(pcd::StepOption::KappaBar, r) == 2.5);

  const pcd::SparsityReport bad = report_with(1.5, 4, 2.5, false);
  CHECK_THROWS_AS(pcd::step_size_c(pcd::StepOption::Rho, bad),
                  pcd::UnconvergedRhoError);
  CHECK(pcd::step_size_c(pcd::StepOption::Rho, bad, true) == 1.5);
  CHECK(pcd::step_size_c(pcd::StepOption::Kappa, bad) == 4.0);
}

TEST_CASE("interference grows linearly in the subset size") {
  using pcd::Sampling;
  CHECK(pcd::interference_sigma(34, 100, 4.0, Sampling::UniformSubset) == 1.0);
  CHECK(pcd::interference_sigma(1, 100, 4.0, Sampling::UniformSubset) == 0.0);
  CHECK(pcd::interference_sigma(1, 1, 9.0, Sampling::UniformSubset) == 0.0);
  // Full parallelism reproduces the dense coupling exactly, bitwise.
  CHECK(pcd::interference_sigma(100, 100, 4.3, Sampling::UniformSubset) == 3.3);
  CHECK(pcd::interference_sigma(100, 100, 4.3, Sampling::BlockPartition) == 3.3);
  CHECK(pcd::interference_sigma(50, 100, 3.0, Sampling::BlockPartition) == 1.0);
}

TEST_CASE("largest admissible step") {
  CHECK(pcd::eta_star(0.0) == 1.0);
  CHECK(pcd::eta_star(1.0) == 0.5);
  CHECK(pcd::eta_star(3.0) == 0.25);
}

TEST_CASE("balanced parallelism level") {
  CHECK(pcd::p_star(101, 5.0) == 17);
  CHECK(pcd::p_star(100, 1.0) == 100);   // no interference, use everything
  CHECK(pcd::p_star(100, 0.5) == 100);
  CHECK(pcd::p_star(100, 1e9) == 1);
  CHECK(pcd::p_star(1, 7.0) == 1);
  // (2/3)((10-1)/(3.4-1) + 1) = 19/6, which rounds to 3.
  CHECK(pcd::p_star(10, 3.4) == 3);
}

TEST_CASE("resolved parameters validate the step hypothesis") {
  using pcd::Sampling;
  const auto p = pcd::ShotgunParams::resolve(10, 100, 4.0, 1.0,
                                             Sampling::UniformSubset);
  CHECK(p.sigma == doctest::Approx((9.0 * 3.0) / 99.0));
  CHECK(p.step_slack == doctest::Approx(1.0 - 0.5 * (1.0 + p.sigma)));
  CHECK_NOTHROW(p.validate(100));

  // eta too large for the interference level.
  CHECK_THROWS_AS(pcd::ShotgunParams::resolve(100, 100, 4.0, 1.0,
                                              Sampling::UniformSubset),
                  pcd::ValidationError);

  // Block sampling needs P to divide d.
  CHECK_THROWS_AS(pcd::ShotgunParams::resolve(7, 100, 2.0, 0.5,
                                              Sampling::BlockPartition),
                  pcd::ValidationError);

  auto r = pcd::ShotgunParams::resolve(10, 100, 4.0, 0.5,
                                       Sampling::UniformSubset);
  r.lambda = 0.3;
  CHECK_THROWS_AS(r.validate(100), pcd::ValidationError);
}

TEST_CASE("automatic step choice pins the slack to one half") {
  const auto p = pcd::ShotgunParams::resolve_optimal_eta(
      10, 100, 4.0, pcd::Sampling::UniformSubset);
  CHECK(p.eta == 1.0 / (1.0 + p.sigma));
  CHECK(p.step_slack == 0.5);
  CHECK(p.eta_auto);

  // At P = d with the automatic step, eta is bitwise 1/rho.
  const auto full = pcd::ShotgunParams::resolve_optimal_eta(
      100, 100, 3.7, pcd::Sampling::UniformSubset);
  CHECK(full.eta == 1.0 / 3.7);
  CHECK(full.step_slack == 0.5);
}

TEST_CASE("step-back coefficient values") {
  pcd::ThetaSchedule sched;
  // P=1, d=10, eta=1, sigma=0, t=1: (theta_1/theta_2)(1 - 0.2 * 0.5).
  CHECK(pcd::step_back_coefficient(sched, 1, 1, 10, 1.0, 0.0) ==
        doctest::Approx(0.5562305898749054).epsilon(1e-15));

  // The params overload uses the cached slack; at P = d with the automatic
  // step the inner factor is exactly zero for every t.
  const auto full = pcd::ShotgunParams::resolve_optimal_eta(
      80, 80, 2.9, pcd::Sampling::UniformSubset);
  for (std::size_t t = 1; t <= 50; ++t) {
    CHECK(pcd::step_back_coefficient(sched, t, 80, full) == 0.0);
  }
}

TEST_CASE("rate certificates evaluate and invert") {
  CHECK(pcd::theorem1_bound(5.0, 1.0, 1.0, 10) == 0.1);
  CHECK(pcd::theorem2_bound(1.0, 10, 10, 1.0, 0.0, 5.0, 10) ==
        doctest::Approx(0.1).epsilon(1e-15));

  CHECK(pcd::iterations_to_eps_theorem1(5.0, 1.0, 1.0, 0.1) == 10);
  const std::int64_t t1 = pcd::iterations_to_eps_theorem1(3.0, 0.25, 2.0, 1e-6);
  CHECK(pcd::theorem1_bound(3.0, 0.25, 2.0, t1) <= 1e-6);
  CHECK(pcd::theorem1_bound(3.0, 0.25, 2.0, t1 - 1) > 1e-6);

  const std::int64_t t2 =
      pcd::iterations_to_eps_theorem2(1.0, 50, 7, 0.8, 0.4, 3.0, 1e-5);
  CHECK(pcd::theorem2_bound(1.0, 50, 7, 0.8, 0.4, 3.0, t2) <= 1e-5);
  CHECK(pcd::theorem2_bound(1.0, 50, 7, 0.8, 0.4, 3.0, t2 - 1) > 1e-5);
}

TEST_CASE("full-parallel certificate collapses to the deterministic one") {
  const double rho = 2.6180339887498949;
  const auto params = pcd::ShotgunParams::resolve_optimal_eta(
      40, 40, rho, pcd::Sampling::UniformSubset);
  for (std::int64_t t : {2, 10, 100, 1000}) {
    CHECK(pcd::theorem2_bound(1.0, 40, params, 3.5, t) ==
          doctest::Approx(pcd::theorem1_bound(rho, 1.0, 3.5, t)).epsilon(1e-14));
  }
}
