#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pcd/errors.hpp"
#include "pcd/generate.hpp"
#include "pcd/trace.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* tag) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("pcd_trace_test_" + std::string(tag) + "_" +
          std::to_string(++counter) + ".csv");
}

}  // namespace

TEST_CASE("trace csv round trip is exact") {
  pcd::Trace t;
  pcd::TraceRow r;
  r.iter = 1;
  r.elapsed_ns = 1234;
  r.objective = 0.1 + 0.2;  // deliberately not a round decimal
  t.push_back(r);
  r.iter = 17;
  r.elapsed_ns = 98765432100;
  r.objective = 3.0 / 7.0;
  r.suboptimality = 1e-13 * (1.0 / 3.0);
  r.grad_inf_norm = 2.2250738585072014e-308;
  t.push_back(r);

  const fs::path path = temp_file("roundtrip");
  pcd::write_trace_csv(t, path);
  const pcd::Trace back = pcd::read_trace_csv(path);
  fs::remove(path);

  REQUIRE(back.size() == 2);
  CHECK(back[0].iter == 1);
  CHECK(back[0].elapsed_ns == 1234);
  CHECK(back[0].objective == t[0].objective);
  CHECK(!back[0].suboptimality.has_value());
  CHECK(!back[0].grad_inf_norm.has_value());
  CHECK(back[1].iter == 17);
  CHECK(back[1].objective == t[1].objective);
  CHECK(back[1].suboptimality == t[1].suboptimality);
  CHECK(back[1].grad_inf_norm == t[1].grad_inf_norm);
}

TEST_CASE("trace reader rejects malformed files") {
  const fs::path path = temp_file("bad");

  std::ofstream(path) << "iter,objective\n";
  CHECK_THROWS_AS(pcd::read_trace_csv(path), pcd::ParseError);

  std::ofstream(path) << "iter,elapsed_ns,objective,suboptimality,grad_inf_norm\n"
                      << "1,0\n";
  CHECK_THROWS_AS(pcd::read_trace_csv(path), pcd::ParseError);

  std::ofstream(path) << "iter,elapsed_ns,objective,suboptimality,grad_inf_norm\n"
                      << "1,0,abc,,\n";
  try {
    pcd::read_trace_csv(path);
    FAIL("expected a parse error");
  } catch (const pcd::ParseError& e) {
    CHECK(e.line == 2);
  }
  fs::remove(path);
}

TEST_CASE("generation is deterministic per seed") {
  pcd::GenerateConfig cfg;
  cfg.n = 30;
  cfg.d = 22;
  cfg.density = 0.25;
  cfg.noise_std = 0.4;
  cfg.w_star_nnz = 5;
  cfg.seed = 31;
  const pcd::GeneratedProblem a = pcd::generate_problem(cfg);
  const pcd::GeneratedProblem b = pcd::generate_problem(cfg);
  CHECK(a.dataset.X.values == b.dataset.X.values);
  CHECK(a.dataset.X.row_idx == b.dataset.X.row_idx);
  CHECK(a.dataset.y == b.dataset.y);
  CHECK(a.w_star == b.w_star);

  cfg.seed = 32;
  const pcd::GeneratedProblem c = pcd::generate_problem(cfg);
  CHECK(a.dataset.X.values != c.dataset.X.values);
}

TEST_CASE("generated problems have the advertised shape") {
  pcd::GenerateConfig cfg;
  cfg.n = 40;
  cfg.d = 30;
  cfg.density = 0.2;
  cfg.w_star_nnz = 7;
  cfg.seed = 8;
  const pcd::GeneratedProblem prob = pcd::generate_problem(cfg);

  CHECK(prob.dataset.normalized);
  for (int j = 0; j < 30; ++j) {
    CHECK(prob.dataset.X.column_norm_sq(j) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prob.dataset.X.col_ptr[j + 1] > prob.dataset.X.col_ptr[j]);
  }
  int nnz = 0;
  for (double v : prob.w_star) {
    if (v != 0.0) ++nnz;
  }
  CHECK(nnz == 7);

  // Noiseless square responses sit exactly on the planted model.
  pcd::GenerateConfig clean = cfg;
  clean.noise_std = 0.0;
  const pcd::GeneratedProblem exact = pcd::generate_problem(clean);
  std::vector<double> margins(40);
  exact.dataset.X.multiply(exact.w_star, margins);
  CHECK(exact.dataset.y == margins);
}

TEST_CASE("logistic generation emits plus-minus-one labels") {
  pcd::GenerateConfig cfg;
  cfg.n = 60;
  cfg.d = 20;
  cfg.loss = pcd::LossKind::Logistic;
  cfg.seed = 12;
  const pcd::GeneratedProblem prob = pcd::generate_problem(cfg);
  int plus = 0, minus = 0;
  for (double y : prob.dataset.y) {
    REQUIRE((y == 1.0 || y == -1.0));
    (y == 1.0 ? plus : minus) += 1;
  }
  CHECK(plus > 0);
  CHECK(minus > 0);
}

TEST_CASE("generator validates its configuration") {
  pcd::GenerateConfig cfg;
  cfg.density = 0.0;
  CHECK_THROWS_AS(pcd::generate_problem(cfg), pcd::ValidationError);
  cfg.density = 1.5;
  CHECK_THROWS_AS(pcd::generate_problem(cfg), pcd::ValidationError);
  cfg.density = 0.5;
  cfg.w_star_nnz = cfg.d + 1;
  CHECK_THROWS_AS(pcd::generate_problem(cfg), pcd::ValidationError);
  cfg.w_star_nnz = 2;
  cfg.noise_std = -1.0;
  CHECK_THROWS_AS(pcd::generate_problem(cfg), pcd::ValidationError);
}

TEST_CASE("tiny dense generation fills the whole matrix") {
  pcd::GenerateConfig cfg;
  cfg.n = 2;
  cfg.d = 2;
  cfg.density = 1.0;
  cfg.w_star_nnz = 1;
  cfg.seed = 77;
  const pcd::GeneratedProblem prob = pcd::generate_problem(cfg);
  CHECK(prob.dataset.X.nnz() == 4);
}
