#include <cmath>
#include <numeric>

#include "pcd/errors.hpp"
#include "pcd/generate.hpp"
#include "pcd/rng.hpp"

namespace pcd {

namespace {

double nonzero_normal(Rng& rng) {
  double v;
  do {
    v = rng.normal();
  } while (v == 0.0);
  return v;
}

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

}  // namespace

GeneratedProblem generate_problem(const GenerateConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1) throw ValidationError("n and d must be at least 1");
  if (!(cfg.density > 0.0) || cfg.density > 1.0 || !std::isfinite(cfg.density)) {
    throw ValidationError("density must lie in (0, 1]");
  }
  if (!std::isfinite(cfg.noise_std) || cfg.noise_std < 0.0) {
    throw ValidationError("noise_std must be finite and non-negative");
  }
  if (cfg.w_star_nnz < 0 || cfg.w_star_nnz > cfg.d) {
    throw ValidationError("w_star_nnz must lie in [0, d]");
  }

  const int n = cfg.n;
  const int d = cfg.d;

  Rng mrng(cfg.seed, kStreamMatrix);
  std::vector<std::int64_t> col_ptr(static_cast<std::size_t>(d) + 1, 0);
  std::vector<int> row_idx;
  std::vector<double> values;
  for (int j = 0; j < d; ++j) {
    const std::size_t col_start = row_idx.size();
    for (int i = 0; i < n; ++i) {
      if (mrng.uniform() < cfg.density) {
        row_idx.push_back(i);
        values.push_back(nonzero_normal(mrng));
      }
    }
    if (row_idx.size() == col_start) {
      // Keep every column usable: an empty one cannot be normalized.
      row_idx.push_back(static_cast<int>(mrng.index(static_cast<std::uint64_t>(n))));
      values.push_back(nonzero_normal(mrng));
    }
    col_ptr[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(row_idx.size());
  }
  SparseColMatrix raw = SparseColMatrix::from_csc(n, d, std::move(col_ptr),
                                                  std::move(row_idx), std::move(values));
  NormalizeResult norm = normalize_columns(raw, ZeroColumnPolicy::Error);

  Rng trng(cfg.seed, kStreamTruth);
  std::vector<double> w_star(static_cast<std::size_t>(d), 0.0);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < cfg.w_star_nnz; ++k) {
    const int r = k + static_cast<int>(trng.index(static_cast<std::uint64_t>(d - k)));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(r)]);
    w_star[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] =
        nonzero_normal(trng);
  }

  std::vector<double> margins(static_cast<std::size_t>(n), 0.0);
  norm.matrix.multiply(w_star, margins);

  Rng nrng(cfg.seed, kStreamNoise);
  std::vector<double> y(static_cast<std::size_t>(n));
  if (cfg.loss == LossKind::Square) {
    for (int i = 0; i < n; ++i) {
      double yi = margins[static_cast<std::size_t>(i)];
      if (cfg.noise_std > 0.0) yi += cfg.noise_std * nrng.normal();
      y[static_cast<std::size_t>(i)] = yi;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double p = sigmoid(margins[static_cast<std::size_t>(i)]);
      y[static_cast<std::size_t>(i)] = nrng.uniform() < p ? 1.0 : -1.0;
    }
  }

  GeneratedProblem out;
  out.dataset.X = std::move(norm.matrix);
  out.dataset.y = std::move(y);
  out.dataset.scales.assign(static_cast<std::size_t>(d), 1.0);
  out.dataset.normalized = true;
  out.w_star = std::move(w_star);
  return out;
}

}  // namespace pcd
