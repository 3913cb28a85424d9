#pragma once

#include <cstdint>

#include "pcd/dataset.hpp"
#include "pcd/loss.hpp"

namespace pcd {

// Synthetic regression / classification instances.  Entries of X are drawn
// i.i.d. standard normal at Bernoulli(density) positions (every column is
// forced to keep at least one entry), columns are normalized, a
// w_star_nnz-sparse ground truth is planted, and responses follow the loss
// model: y = X w* + noise_std * N(0,1) for the square loss, labels sampled
// from the logistic model at margin (X w*)_i otherwise.  A fixed seed gives
// identical output on every run.
struct GenerateConfig {
  int n = 100;
  int d = 100;
  double density = 0.1;
  LossKind loss = LossKind::Square;
  double noise_std = 0.0;
  int w_star_nnz = 10;
  std::uint64_t seed = 0;
};

struct GeneratedProblem {
  Dataset dataset;             // normalized = true, scales all 1
  std::vector<double> w_star;  // length d
};

GeneratedProblem generate_problem(const GenerateConfig& cfg);

}  // namespace pcd
