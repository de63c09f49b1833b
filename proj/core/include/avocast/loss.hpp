#pragma once

#include <span>

#include "avocast/ops.hpp"

namespace avocast {

// Huber transition point, in the same units as the targets.
struct HuberDelta {
  double value = 1.0;
  explicit HuberDelta(double v);
};

// Mean over samples of the piecewise residual penalty: quadratic r^2/2 inside
// |r| <= delta, linear delta*(|r| - delta/2) outside. Both branches meet at
// delta^2/2 and the gradient is continuous across the seam.
TensorPtr huber_loss(Tape& tape, const TensorPtr& y, const TensorPtr& y_hat,
                     const HuberDelta& delta);

// Single-sample Huber value on plain doubles; the same formula the tape op
// applies per element.
double huber_value(double residual, double delta);

double mse(std::span<const double> y, std::span<const double> y_hat);
double rmse(std::span<const double> y, std::span<const double> y_hat);

}  // namespace avocast
