#include "pcd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>

#include "pcd/errors.hpp"
#include "pcd/rng.hpp"

namespace pcd {

NormalizeResult normalize_columns(const SparseColMatrix& X,
                                  ZeroColumnPolicy policy) {
  NormalizeResult out;
  std::vector<std::int64_t> col_ptr{0};
  std::vector<int> row_idx;
  std::vector<double> values;
  row_idx.reserve(X.row_idx.size());
  values.reserve(X.values.size());
  for (int j = 0; j < X.cols; ++j) {
    if (X.col_ptr[j] == X.col_ptr[j + 1]) {
      if (policy == ZeroColumnPolicy::Error) throw ZeroColumnError(j);
      out.dropped.push_back(j);
      continue;
    }
    const double norm = std::sqrt(X.column_norm_sq(j));
    if (!std::isfinite(norm) || norm == 0.0) {
      throw NumericError("column " + std::to_string(j) +
                         " has non-finite norm");
    }
    for (std::int64_t k = X.col_ptr[j]; k < X.col_ptr[j + 1]; ++k) {
      row_idx.push_back(X.row_idx[static_cast<std::size_t>(k)]);
      values.push_back(X.values[static_cast<std::size_t>(k)] / norm);
    }
    col_ptr.push_back(static_cast<std::int64_t>(values.size()));
    out.scales.push_back(norm);
  }
  const int kept = static_cast<int>(out.scales.size());
  if (kept == 0) {
    throw ValidationError("all columns are empty; nothing to normalize");
  }
  out.matrix = SparseColMatrix::from_csc(X.rows, kept, std::move(col_ptr),
                                         std::move(row_idx), std::move(values));
  return out;
}

Dataset normalize_dataset(const Dataset& ds, ZeroColumnPolicy policy,
                          std::vector<int>* dropped) {
  if (ds.normalized) {
    if (dropped) dropped->clear();
    return ds;
  }
  NormalizeResult nr = normalize_columns(ds.X, policy);
  if (dropped) *dropped = nr.dropped;
  Dataset out;
  out.X = std::move(nr.matrix);
  out.y = ds.y;
  out.scales = std::move(nr.scales);
  out.normalized = true;
  return out;
}

std::vector<double> unscale_solution(std::span<const double> w,
                                     std::span<const double> scales) {
  if (w.size() != scales.size()) {
    throw ValidationError("solution and scales lengths differ");
  }
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (scales[j] == 0.0 || !std::isfinite(scales[j])) {
      throw ValidationError("scale " + std::to_string(j) +
                            " must be finite and nonzero");
    }
    out[j] = w[j] / scales[j];
  }
  return out;
}

SparsityMeasures sparsity_measures(const SparseColMatrix& X) {
  SparsityMeasures m;
  m.row_counts.assign(static_cast<std::size_t>(X.rows), 0);
  for (int idx : X.row_idx) ++m.row_counts[static_cast<std::size_t>(idx)];
  m.kappa = 0;
  for (int c : m.row_counts) m.kappa = std::max(m.kappa, c);
  m.kappa_bar = 0.0;
  for (int j = 0; j < X.cols; ++j) {
    double acc = 0.0;
    for (std::int64_t k = X.col_ptr[j]; k < X.col_ptr[j + 1]; ++k) {
      const double v = X.values[static_cast<std::size_t>(k)];
      acc += m.row_counts[static_cast<std::size_t>(
                 X.row_idx[static_cast<std::size_t>(k)])] *
             (v * v);
    }
    m.kappa_bar = std::max(m.kappa_bar, acc);
  }
  return m;
}

SpectralEstimate spectral_radius(const SparseColMatrix& X, double tol,
                                 int max_iter, std::uint64_t seed,
                                 std::vector<double>* estimates) {
  if (tol <= 0.0) throw ValidationError("power iteration tol must be positive");
  if (max_iter < 1) throw ValidationError("power iteration needs max_iter >= 1");
  const int n = X.rows, d = X.cols;

  Rng rng(seed, kStreamPower);
  std::vector<double> v(static_cast<std::size_t>(d));
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.normal();
    double s = 0.0;
    for (double x : v) s += x * x;
    norm = std::sqrt(s);
  }
  for (double& x : v) x /= norm;

  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(d));
  SpectralEstimate est;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    est.iterations = it;
    X.multiply(v, s);
    double rho = 0.0;
    for (double x : s) rho += x * x;  // Rayleigh quotient, ||v|| = 1
    if (!std::isfinite(rho)) {
      throw NumericError("power iteration produced a non-finite estimate");
    }
    est.rho = rho;
    if (estimates) estimates->push_back(rho);
    if (it >= 2 && std::abs(rho - prev) <= tol * std::max(rho, 1e-300)) {
      est.converged = true;
      return est;
    }
    prev = rho;
    X.multiply_transpose(s, z);
    double zn = 0.0;
    for (double x : z) zn += x * x;
    zn = std::sqrt(zn);
    if (!std::isfinite(zn)) {
      throw NumericError("power iteration produced a non-finite vector");
    }
    if (zn == 0.0) {
      est.rho = 0.0;
      est.converged = true;
      return est;
    }
    for (int j = 0; j < d; ++j) v[j] = z[j] / zn;
  }
  return est;
}

SparsityReport analyze_matrix(const SparseColMatrix& X, double rho_tol,
                              int rho_max_iter, std::uint64_t seed) {
  SparsityReport r;
  r.n = X.rows;
  r.d = X.cols;
  r.nnz = X.nnz();
  SparsityMeasures m = sparsity_measures(X);
  r.row_counts = std::move(m.row_counts);
  r.kappa = m.kappa;
  r.kappa_bar = m.kappa_bar;
  SpectralEstimate e = spectral_radius(X, rho_tol, rho_max_iter, seed);
  r.rho = e.rho;
  r.rho_converged = e.converged;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const char* skip_ws(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  return p;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<double> labels;
  // Triplets arrive row by row, so per-column row indices end up sorted.
  std::vector<std::vector<std::pair<int, double>>> by_line;
  int max_feature = 0;

  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* p = line.data();
    const char* end = p + line.size();
    p = skip_ws(p, end);
    if (p == end || *p == '#') continue;

    double label;
    auto lr = std::from_chars(p, end, label);
    if (lr.ec != std::errc() || !std::isfinite(label)) {
      throw ParseError(lineno, "expected a finite label");
    }
    p = lr.ptr;

    std::vector<std::pair<int, double>> feats;
    int prev_idx = 0;
    for (;;) {
      const char* q = skip_ws(p, end);
      if (q == end) break;
      if (q == p) throw ParseError(lineno, "tokens must be whitespace-separated");
      p = q;
      int idx;
      auto ir = std::from_chars(p, end, idx);
      if (ir.ec != std::errc() || ir.ptr == end || *ir.ptr != ':') {
        throw ParseError(lineno, "expected idx:value");
      }
      if (idx < 1) throw ParseError(lineno, "feature index must be >= 1");
      if (idx <= prev_idx) {
        throw ParseError(lineno,
                         idx == prev_idx
                             ? "duplicate feature index " + std::to_string(idx)
                             : "feature indices must be strictly increasing");
      }
      double value;
      auto vr = std::from_chars(ir.ptr + 1, end, value);
      if (vr.ec != std::errc()) throw ParseError(lineno, "bad feature value");
      if (!std::isfinite(value)) {
        throw ParseError(lineno, "feature value must be finite");
      }
      if (value == 0.0) {
        throw ParseError(lineno, "explicit zero value for feature " +
                                     std::to_string(idx));
      }
      prev_idx = idx;
      max_feature = std::max(max_feature, idx);
      feats.emplace_back(idx - 1, value);
      p = vr.ptr;
    }
    labels.push_back(label);
    by_line.push_back(std::move(feats));
  }
  if (labels.empty()) throw ParseError(0, "empty dataset");

  const int n = static_cast<int>(labels.size());
  const int d = std::max(max_feature, 1);

  std::vector<std::int64_t> col_counts(static_cast<std::size_t>(d) + 1, 0);
  for (const auto& feats : by_line) {
    for (const auto& [j, v] : feats) ++col_counts[static_cast<std::size_t>(j) + 1];
  }
  std::vector<std::int64_t> col_ptr(col_counts);
  for (int j = 0; j < d; ++j) col_ptr[j + 1] += col_ptr[j];
  std::vector<std::int64_t> cursor(col_ptr.begin(), col_ptr.end() - 1);
  std::vector<int> row_idx(static_cast<std::size_t>(col_ptr.back()));
  std::vector<double> values(row_idx.size());
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, v] : by_line[static_cast<std::size_t>(i)]) {
      const auto k = static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++);
      row_idx[k] = i;
      values[k] = v;
    }
  }

  Dataset ds;
  ds.X = SparseColMatrix::from_csc(n, d, std::move(col_ptr), std::move(row_idx),
                                   std::move(values));
  ds.y = std::move(labels);
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());

  // Regroup CSC storage by row; scanning columns in ascending order leaves
  // each row's features already sorted.
  const SparseColMatrix& X = ds.X;
  std::vector<std::int64_t> row_start(static_cast<std::size_t>(X.rows) + 1, 0);
  for (int i : X.row_idx) ++row_start[static_cast<std::size_t>(i) + 1];
  for (int i = 0; i < X.rows; ++i) row_start[i + 1] += row_start[i];
  std::vector<std::int64_t> cursor(row_start.begin(), row_start.end() - 1);
  std::vector<int> cols_of(static_cast<std::size_t>(X.nnz()));
  std::vector<double> vals_of(static_cast<std::size_t>(X.nnz()));
  for (int j = 0; j < X.cols; ++j) {
    for (std::int64_t k = X.col_ptr[j]; k < X.col_ptr[j + 1]; ++k) {
      const int i = X.row_idx[static_cast<std::size_t>(k)];
      const auto pos = static_cast<std::size_t>(cursor[static_cast<std::size_t>(i)]++);
      cols_of[pos] = j;
      vals_of[pos] = X.values[static_cast<std::size_t>(k)];
    }
  }

  std::string line;
  for (int i = 0; i < X.rows; ++i) {
    line.clear();
    line += format_double(ds.y[static_cast<std::size_t>(i)]);
    for (std::int64_t k = row_start[i]; k < row_start[i + 1]; ++k) {
      line += ' ';
      line += std::to_string(cols_of[static_cast<std::size_t>(k)] + 1);
      line += ':';
      line += format_double(vals_of[static_cast<std::size_t>(k)]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace pcd
