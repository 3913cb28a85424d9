#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <string>

#include "doctest.h"
#include "pcd/dataset.hpp"
#include "pcd/errors.hpp"
#include "pcd/generate.hpp"
#include "pcd/rng.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

// Rows (0.6, 0.8), (0.8, 0), (0, 0.6): unit columns, row counts (2, 1, 1).
// Hand-checked quantities: kappa = 2, kappa_bar = max(1.36, 1.64) = 1.64,
// gram = [[1, 0.48], [0.48, 1]] so the top eigenvalue is 1.48.
pcd::SparseColMatrix example_matrix() {
  return pcd::SparseColMatrix::from_dense(
      3, 2, std::vector<double>{0.6, 0.8, 0.8, 0.0, 0.0, 0.6});
}

fs::path temp_file(const char* tag) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("pcd_dataset_test_" + std::string(tag) + "_" +
          std::to_string(++counter) + ".txt");
}

}  // namespace

TEST_CASE("csc construction rejects malformed input") {
  CHECK_THROWS_AS(pcd::SparseColMatrix::from_csc(2, 1, {0, 2}, {1, 0}, {1.0, 2.0}),
                  pcd::ValidationError);  // rows not increasing
  CHECK_THROWS_AS(pcd::SparseColMatrix::from_csc(2, 1, {0, 1}, {0}, {0.0}),
                  pcd::ValidationError);  // explicit zero
  CHECK_THROWS_AS(pcd::SparseColMatrix::from_csc(2, 1, {0, 1}, {2}, {1.0}),
                  pcd::ValidationError);  // row out of range
  CHECK_THROWS_AS(pcd::SparseColMatrix::from_csc(2, 2, {0, 1}, {0}, {1.0}),
                  pcd::ValidationError);  // col_ptr too short
}

TEST_CASE("sparse products match dense recomputation") {
  pcd::GenerateConfig cfg;
  cfg.n = 23;
  cfg.d = 17;
  cfg.density = 0.3;
  cfg.seed = 42;
  const pcd::GeneratedProblem prob = pcd::generate_problem(cfg);
  const pcd::SparseColMatrix& X = prob.dataset.X;
  const testref::DenseMatrix D = testref::to_dense(X);

  pcd::Rng rng(7, 99);
  std::vector<double> w(17), g(23);
  for (double& x : w) x = rng.normal();
  for (double& x : g) x = rng.normal();

  std::vector<double> got_m(23), got_t(17);
  X.multiply(w, got_m);
  X.multiply_transpose(g, got_t);

  const std::vector<double> want_m = testref::matvec(D, w);
  for (int i = 0; i < 23; ++i) CHECK(got_m[i] == doctest::Approx(want_m[i]).epsilon(1e-12));
  for (int j = 0; j < 17; ++j) {
    double s = 0.0;
    for (int i = 0; i < 23; ++i) s += D.at(i, j) * g[i];
    CHECK(got_t[j] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("normalize_columns scales to unit norm and reports the scales") {
  const auto X = pcd::SparseColMatrix::from_dense(
      2, 2, std::vector<double>{2.0, 0.0, 0.0, 3.0});
  const pcd::NormalizeResult nr = pcd::normalize_columns(X);
  REQUIRE(nr.scales.size() == 2);
  CHECK(nr.scales[0] == 2.0);
  CHECK(nr.scales[1] == 3.0);
  CHECK(nr.matrix.values[0] == 1.0);
  CHECK(nr.matrix.values[1] == 1.0);
  CHECK(nr.dropped.empty());

  const std::vector<double> w{0.5, -1.0};
  const std::vector<double> orig = pcd::unscale_solution(w, nr.scales);
  CHECK(orig[0] == 0.25);
  CHECK(orig[1] == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("zero columns raise or drop according to policy") {
  const auto X = pcd::SparseColMatrix::from_csc(2, 3, {0, 1, 1, 2}, {0, 1},
                                                {4.0, 2.0});
  CHECK_THROWS_AS(pcd::normalize_columns(X, pcd::ZeroColumnPolicy::Error),
                  pcd::ZeroColumnError);
  try {
    pcd::normalize_columns(X, pcd::ZeroColumnPolicy::Error);
  } catch (const pcd::ZeroColumnError& e) {
    CHECK(e.column == 1);
  }
  const pcd::NormalizeResult nr =
      pcd::normalize_columns(X, pcd::ZeroColumnPolicy::Drop);
  CHECK(nr.matrix.cols == 2);
  REQUIRE(nr.dropped.size() == 1);
  CHECK(nr.dropped[0] == 1);
}

TEST_CASE("normalize_dataset passes already-normalized data through") {
  pcd::GenerateConfig cfg;
  cfg.n = 10;
  cfg.d = 6;
  cfg.w_star_nnz = 3;
  cfg.seed = 3;
  const pcd::Dataset ds = pcd::generate_problem(cfg).dataset;
  REQUIRE(ds.normalized);
  const pcd::Dataset again = pcd::normalize_dataset(ds);
  CHECK(again.X.values == ds.X.values);
  CHECK(again.scales == ds.scales);
}

TEST_CASE("sparsity measures on the worked example") {
  const pcd::SparsityMeasures m = pcd::sparsity_measures(example_matrix());
  CHECK(m.row_counts == std::vector<int>{2, 1, 1});
  CHECK(m.kappa == 2);
  CHECK(m.kappa_bar == doctest::Approx(1.64).epsilon(1e-12));
}

TEST_CASE("spectral radius of the worked example") {
  const pcd::SpectralEstimate est = pcd::spectral_radius(example_matrix());
  CHECK(est.converged);
  CHECK(est.rho == doctest::Approx(1.48).epsilon(1e-8));
}

TEST_CASE("power iteration estimates grow monotonically") {
  pcd::GenerateConfig cfg;
  cfg.n = 40;
  cfg.d = 30;
  cfg.density = 0.25;
  cfg.seed = 5;
  const pcd::Dataset ds = pcd::generate_problem(cfg).dataset;
  std::vector<double> estimates;
  const pcd::SpectralEstimate est =
      pcd::spectral_radius(ds.X, 1e-12, 2000, 1, &estimates);
  REQUIRE(estimates.size() >= 2);
  for (std::size_t k = 1; k < estimates.size(); ++k) {
    CHECK(estimates[k] >= estimates[k - 1] - 1e-12 * std::max(1.0, estimates[k - 1]));
  }
  const double jacobi =
      testref::max_eigenvalue_symmetric(testref::gram(testref::to_dense(ds.X)));
  CHECK(est.rho == doctest::Approx(jacobi).epsilon(1e-9));
}

TEST_CASE("sparsity quantities are ordered on random normalized matrices") {
  for (int trial = 0; trial < 30; ++trial) {
    pcd::GenerateConfig cfg;
    cfg.n = 15 + 7 * trial % 60;
    cfg.d = 10 + 5 * trial % 45;
    cfg.density = trial % 3 == 0 ? 0.08 : (trial % 3 == 1 ? 0.3 : 1.0);
    cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
    const pcd::Dataset ds = pcd::generate_problem(cfg).dataset;
    const pcd::SparsityReport r = pcd::analyze_matrix(ds.X, 1e-10, 20000, cfg.seed);
    CHECK(r.rho <= r.kappa_bar + 1e-7);
    CHECK(r.kappa_bar <= static_cast<double>(r.kappa) + 1e-12);
  }
}

TEST_CASE("normalization is invariant to power-of-two column rescaling") {
  const int n = 12, d = 8;
  pcd::Rng rng(77, 2);
  std::vector<double> entries(static_cast<std::size_t>(n) * d, 0.0);
  for (double& e : entries) {
    if (rng.uniform() < 0.5) e = rng.normal();
  }
  for (int j = 0; j < d; ++j) {
    entries[static_cast<std::size_t>(j) * d + j] = 1.0 + j;
  }
  const pcd::SparseColMatrix raw = pcd::SparseColMatrix::from_dense(n, d, entries);
  const pcd::NormalizeResult base = pcd::normalize_columns(raw);

  // Scaling a column by a power of two scales its norm exactly, and the
  // quotient of two exactly scaled numbers rounds to the unscaled quotient,
  // so normalization lands on bitwise identical values.
  pcd::SparseColMatrix scaled = raw;
  for (int j = 0; j < scaled.cols; ++j) {
    const double f = j % 2 == 0 ? 4.0 : 0.5;
    for (std::int64_t k = scaled.col_ptr[j]; k < scaled.col_ptr[j + 1]; ++k) {
      scaled.values[static_cast<std::size_t>(k)] *= f;
    }
  }
  const pcd::NormalizeResult nr = pcd::normalize_columns(scaled);
  CHECK(nr.matrix.values == base.matrix.values);
}

TEST_CASE("dataset files round-trip exactly") {
  pcd::GenerateConfig cfg;
  cfg.n = 25;
  cfg.d = 14;
  cfg.density = 0.4;
  cfg.noise_std = 0.3;
  cfg.seed = 9;
  const pcd::Dataset ds = pcd::generate_problem(cfg).dataset;

  const fs::path path = temp_file("roundtrip");
  pcd::save_dataset(ds, path);
  const pcd::Dataset back = pcd::load_dataset(path);
  fs::remove(path);

  CHECK(back.n() == ds.n());
  CHECK(back.d() == ds.d());
  CHECK(back.y == ds.y);
  CHECK(back.X.col_ptr == ds.X.col_ptr);
  CHECK(back.X.row_idx == ds.X.row_idx);
  CHECK(back.X.values == ds.X.values);
}

TEST_CASE("loader reports malformed lines with their line number") {
  const fs::path path = temp_file("parse");
  auto expect_parse_error = [&](const char* content, std::int64_t line) {
    std::ofstream(path) << content;
    try {
      pcd::load_dataset(path);
      FAIL("expected a parse error");
    } catch (const pcd::ParseError& e) {
      CHECK(e.line == line);
    }
  };
  expect_parse_error("1 1:0.5\nnot-a-label 1:1\n", 2);
  expect_parse_error("1 2:1 2:3\n", 1);      // duplicate index
  expect_parse_error("1 3:1 2:1\n", 1);      // decreasing index
  expect_parse_error("1 0:1\n", 1);          // indices are 1-based
  expect_parse_error("1 1:0\n", 1);          // explicit zero
  expect_parse_error("# only a comment\n", 0);
  fs::remove(path);
}

TEST_CASE("format_double survives a parse round trip") {
  pcd::Rng rng(13, 8);
  for (int k = 0; k < 200; ++k) {
    const double v = std::ldexp(rng.normal(), static_cast<int>(rng.index(41)) - 20);
    const std::string s = pcd::format_double(v);
    CHECK(std::stod(s) == v);
  }
}
