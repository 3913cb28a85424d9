#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pcd/sparse_matrix.hpp"

namespace pcd {

// A design matrix with one response per row.  `scales` holds the original
// column norms when the dataset has been normalized in-process (empty
// otherwise); solutions computed on the normalized data are mapped back by
// unscale_solution.
struct Dataset {
  SparseColMatrix X;
  std::vector<double> y;
  std::vector<double> scales;  // per kept column; empty if not normalized
  bool normalized = false;

  int n() const { return X.rows; }
  int d() const { return X.cols; }
};

enum class ZeroColumnPolicy { Error, Drop };

struct NormalizeResult {
  SparseColMatrix matrix;
  std::vector<double> scales;  // norms of the kept columns, in order
  std::vector<int> dropped;    // original indices of dropped columns
};

// Scale every column to unit Euclidean norm.  A column with no entries
// raises ZeroColumnError, or is removed under ZeroColumnPolicy::Drop.
NormalizeResult normalize_columns(const SparseColMatrix& X,
                                  ZeroColumnPolicy policy = ZeroColumnPolicy::Error);

// normalize_columns applied to a whole dataset; records scales and sets the
// normalized flag.  Already-normalized datasets pass through unchanged.
Dataset normalize_dataset(const Dataset& ds,
                          ZeroColumnPolicy policy = ZeroColumnPolicy::Error,
                          std::vector<int>* dropped = nullptr);

// Map a solution computed on normalized columns back to the original
// feature scale: out[j] = w[j] / scales[j].
std::vector<double> unscale_solution(std::span<const double> w,
                                     std::span<const double> scales);

// Per-row nonzero counts and the two combinatorial step-size quantities:
// kappa = max_i |row i|, kappa_bar = max_j sum_i |row i| * X_ij^2.
struct SparsityMeasures {
  std::vector<int> row_counts;
  int kappa = 0;
  double kappa_bar = 0.0;
};

SparsityMeasures sparsity_measures(const SparseColMatrix& X);

struct SpectralEstimate {
  double rho = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Largest eigenvalue of X^T X by power iteration on v -> X^T (X v); the
// Gram matrix is never formed.  The estimate is the Rayleigh quotient
// ||Xv||^2 of the current unit vector, which on this positive semidefinite
// operator only grows from iteration to iteration, so an unconverged value
// is still a lower bound.  Convergence is relative change <= tol between
// consecutive estimates.  `estimates`, when given, receives the whole
// sequence.
SpectralEstimate spectral_radius(const SparseColMatrix& X, double tol = 1e-9,
                                 int max_iter = 10000, std::uint64_t seed = 0,
                                 std::vector<double>* estimates = nullptr);

// Everything solvers need to pick step sizes.
struct SparsityReport {
  int n = 0;
  int d = 0;
  std::int64_t nnz = 0;
  std::vector<int> row_counts;
  int kappa = 0;
  double kappa_bar = 0.0;
  double rho = 0.0;
  bool rho_converged = false;
};

SparsityReport analyze_matrix(const SparseColMatrix& X, double rho_tol = 1e-9,
                              int rho_max_iter = 10000, std::uint64_t seed = 0);

// Text format: one example per line, "label idx:value idx:value ...",
// 1-based feature indices strictly increasing within a line, '#' starts a
// comment line.  The feature count is the largest index seen.  Values are
// written with shortest round-trip precision, so save/load is exact.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace pcd
