#include "pcd/sparse_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pcd/errors.hpp"

namespace pcd {

SparseColMatrix SparseColMatrix::from_csc(int rows, int cols,
                                          std::vector<std::int64_t> col_ptr,
                                          std::vector<int> row_idx,
                                          std::vector<double> values) {
  if (rows < 1 || cols < 1) {
    throw ValidationError("matrix dimensions must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (col_ptr.size() != static_cast<std::size_t>(cols) + 1) {
    throw ValidationError("col_ptr must have cols+1 entries");
  }
  if (col_ptr.front() != 0) {
    throw ValidationError("col_ptr must start at 0");
  }
  if (row_idx.size() != values.size() ||
      col_ptr.back() != static_cast<std::int64_t>(values.size())) {
    throw ValidationError("col_ptr must end at nnz and arrays must agree");
  }
  for (int j = 0; j < cols; ++j) {
    if (col_ptr[j] > col_ptr[j + 1]) {
      throw ValidationError("col_ptr must be non-decreasing (column " +
                            std::to_string(j) + ")");
    }
    int prev = -1;
    for (std::int64_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      const int i = row_idx[static_cast<std::size_t>(k)];
      if (i < 0 || i >= rows) {
        throw ValidationError("row index " + std::to_string(i) +
                              " out of range in column " + std::to_string(j));
      }
      if (i <= prev) {
        throw ValidationError(
            "row indices must be strictly increasing in column " +
            std::to_string(j));
      }
      prev = i;
      const double v = values[static_cast<std::size_t>(k)];
      if (v == 0.0) {
        throw ValidationError("explicit zero stored in column " +
                              std::to_string(j));
      }
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite value in column " + std::to_string(j));
      }
    }
  }
  SparseColMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.col_ptr = std::move(col_ptr);
  m.row_idx = std::move(row_idx);
  m.values = std::move(values);
  return m;
}

SparseColMatrix SparseColMatrix::from_dense(int rows, int cols,
                                            std::span<const double> entries) {
  if (rows < 1 || cols < 1) {
    throw ValidationError("matrix dimensions must be positive");
  }
  if (entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ValidationError("dense input has wrong length");
  }
  std::vector<std::int64_t> col_ptr(static_cast<std::size_t>(cols) + 1, 0);
  std::vector<int> row_idx;
  std::vector<double> values;
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double v = entries[static_cast<std::size_t>(i) * cols + j];
      if (v != 0.0) {
        row_idx.push_back(i);
        values.push_back(v);
      }
    }
    col_ptr[static_cast<std::size_t>(j) + 1] =
        static_cast<std::int64_t>(values.size());
  }
  return from_csc(rows, cols, std::move(col_ptr), std::move(row_idx),
                  std::move(values));
}

double SparseColMatrix::column_norm_sq(int j) const {
  double s = 0.0;
  for (std::int64_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
    const double v = values[static_cast<std::size_t>(k)];
    s += v * v;
  }
  return s;
}

void SparseColMatrix::multiply(std::span<const double> w,
                               std::span<double> out) const {
  for (int i = 0; i < rows; ++i) out[i] = 0.0;
  for (int j = 0; j < cols; ++j) {
    const double wj = w[j];
    if (wj == 0.0) continue;
    for (std::int64_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      out[row_idx[static_cast<std::size_t>(k)]] +=
          values[static_cast<std::size_t>(k)] * wj;
    }
  }
}

void SparseColMatrix::multiply_transpose(std::span<const double> g,
                                         std::span<double> out) const {
  for (int j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (std::int64_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      acc += values[static_cast<std::size_t>(k)] *
             g[row_idx[static_cast<std::size_t>(k)]];
    }
    out[j] = acc;
  }
}

}  // namespace pcd
