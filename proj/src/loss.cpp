#include "pcd/loss.hpp"

#include <cmath>
#include <string>

#include "pcd/errors.hpp"

namespace pcd {

double loss_value(LossKind kind, double yhat, double y) {
  if (kind == LossKind::Square) {
    const double r = yhat - y;
    return 0.5 * r * r;
  }
  const double m = y * yhat;
  return std::max(0.0, -m) + std::log1p(std::exp(-std::abs(m)));
}

double loss_deriv(LossKind kind, double yhat, double y) {
  if (kind == LossKind::Square) return yhat - y;
  const double m = y * yhat;
  // -y * sigmoid(-m); exp of a non-positive argument in both branches.
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return -y * (e / (1.0 + e));
  }
  return -y / (1.0 + std::exp(m));
}

Objective::Objective(const Dataset& data, LossModel loss, double lambda)
    : data_(&data), loss_(loss), lambda_(lambda) {
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw ValidationError("lambda must be finite and >= 0");
  }
  if (data.y.size() != static_cast<std::size_t>(data.n())) {
    throw ValidationError("response length does not match row count");
  }
  if (loss_.kind == LossKind::Logistic) {
    for (std::size_t i = 0; i < data.y.size(); ++i) {
      if (data.y[i] != 1.0 && data.y[i] != -1.0) {
        throw ValidationError("logistic labels must be +1 or -1 (row " +
                              std::to_string(i) + ")");
      }
    }
  }
}

double smooth_value(const Objective& obj, std::span<const double> margins,
                    ThreadPool* pool) {
  const auto& y = obj.data().y;
  const LossKind kind = obj.loss().kind;
  return deterministic_sum(
      obj.n(),
      [&](std::int64_t b, std::int64_t e) {
        double acc = 0.0;
        for (std::int64_t i = b; i < e; ++i) {
          acc += loss_value(kind, margins[static_cast<std::size_t>(i)],
                            y[static_cast<std::size_t>(i)]);
        }
        return acc;
      },
      pool);
}

double full_value(const Objective& obj, std::span<const double> w,
                  std::span<const double> margins, ThreadPool* pool) {
  double v = smooth_value(obj, margins, pool);
  if (obj.lambda() > 0.0) {
    const double l1 = deterministic_sum(
        obj.d(),
        [&](std::int64_t b, std::int64_t e) {
          double acc = 0.0;
          for (std::int64_t i = b; i < e; ++i) {
            acc += std::abs(w[static_cast<std::size_t>(i)]);
          }
          return acc;
        },
        pool);
    v += obj.lambda() * l1;
  }
  return v;
}

double gradient_coordinate(const Objective& obj, int j,
                           std::span<const double> margins) {
  const SparseColMatrix& X = obj.data().X;
  const auto& y = obj.data().y;
  const LossKind kind = obj.loss().kind;
  double acc = 0.0;
  for (std::int64_t k = X.col_ptr[j]; k < X.col_ptr[j + 1]; ++k) {
    const int i = X.row_idx[static_cast<std::size_t>(k)];
    acc += X.values[static_cast<std::size_t>(k)] *
           loss_deriv(kind, margins[static_cast<std::size_t>(i)],
                      y[static_cast<std::size_t>(i)]);
  }
  return acc;
}

void full_gradient(const Objective& obj, std::span<const double> margins,
                   std::span<double> grad, ThreadPool* pool) {
  const int d = obj.d();
  auto body = [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t j = b; j < e; ++j) {
      grad[static_cast<std::size_t>(j)] =
          gradient_coordinate(obj, static_cast<int>(j), margins);
    }
  };
  if (pool && pool->workers() > 1) {
    pool->parallel_for(d, body);
  } else {
    body(0, d);
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace pcd
