#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pcd {

// Compressed sparse column matrix.
//
// Invariants, enforced at construction:
//   * col_ptr has cols+1 entries, starts at 0, is non-decreasing and ends
//     at nnz;
//   * row indices are strictly increasing within each column and lie in
//     [0, rows);
//   * every stored value is finite and nonzero (no explicit zeros).
struct SparseColMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> col_ptr;  // length cols + 1
  std::vector<int> row_idx;           // length nnz
  std::vector<double> values;         // length nnz

  static SparseColMatrix from_csc(int rows, int cols,
                                  std::vector<std::int64_t> col_ptr,
                                  std::vector<int> row_idx,
                                  std::vector<double> values);

  // Row-major dense input; zeros are simply not stored.
  static SparseColMatrix from_dense(int rows, int cols,
                                    std::span<const double> entries);

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  double column_norm_sq(int j) const;

  // out = X * w.  Accumulates column contributions in ascending column
  // order; single-threaded so the rounding never depends on a worker count.
  void multiply(std::span<const double> w, std::span<double> out) const;

  // out = X^T * g.  Each entry is a dot product taken in storage order.
  void multiply_transpose(std::span<const double> g, std::span<double> out) const;
};

}  // namespace pcd
