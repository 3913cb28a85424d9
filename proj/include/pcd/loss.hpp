#pragma once

#include <span>
#include <vector>

#include "pcd/dataset.hpp"
#include "pcd/parallel.hpp"

namespace pcd {

enum class LossKind { Square, Logistic };

// beta bounds the second derivative of the loss in its first argument:
// 1 for the square loss, 1/4 for the logistic loss.
struct LossModel {
  LossKind kind = LossKind::Square;
  double beta = 1.0;

  static LossModel square() { return {LossKind::Square, 1.0}; }
  static LossModel logistic() { return {LossKind::Logistic, 0.25}; }
  static LossModel of(LossKind k) {
    return k == LossKind::Square ? square() : logistic();
  }
};

// Square: 0.5 * (yhat - y)^2.  Logistic: ln(1 + exp(-y * yhat)), evaluated
// as max(0, -m) + log1p(exp(-|m|)) with m = y * yhat so large margins of
// either sign stay finite.
double loss_value(LossKind kind, double yhat, double y);

// Derivative in the first argument.  The logistic case uses the
// complementary sigmoid -y / (1 + exp(y * yhat)) with the exponential
// always taken of a non-positive number.
double loss_deriv(LossKind kind, double yhat, double y);

// F(w) = sum_i loss(x_i . w, y_i) + lambda * ||w||_1 over a fixed dataset.
// Holds a pointer to the dataset; the dataset must outlive the objective.
// Logistic objectives require labels exactly +-1.
class Objective {
 public:
  Objective(const Dataset& data, LossModel loss, double lambda);

  const Dataset& data() const { return *data_; }
  const LossModel& loss() const { return loss_; }
  double lambda() const { return lambda_; }
  int n() const { return data_->n(); }
  int d() const { return data_->d(); }

 private:
  const Dataset* data_;
  LossModel loss_;
  double lambda_;
};

// sum_i loss(margins[i], y_i).  Reduced in fixed-size chunks so the result
// is identical for every worker count.
double smooth_value(const Objective& obj, std::span<const double> margins,
                    ThreadPool* pool = nullptr);

// smooth_value + lambda * ||w||_1.
double full_value(const Objective& obj, std::span<const double> w,
                  std::span<const double> margins, ThreadPool* pool = nullptr);

// grad_j = sum_i X_ij * loss'(margins[i], y_i).  Gradients are always taken
// from cached margins, never by re-multiplying the iterate.  Each column is
// summed in storage order by exactly one worker, so the result does not
// depend on the worker count.
void full_gradient(const Objective& obj, std::span<const double> margins,
                   std::span<double> grad, ThreadPool* pool = nullptr);

// Single coordinate of the gradient; costs one pass over column j and is
// bit-for-bit equal to full_gradient's entry j.
double gradient_coordinate(const Objective& obj, int j,
                           std::span<const double> margins);

double inf_norm(std::span<const double> v);

}  // namespace pcd
