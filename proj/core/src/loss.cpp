#include "avocast/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace avocast {

HuberDelta::HuberDelta(double v) : value(v) {
  if (!(v > 0.0)) {
    throw std::invalid_argument("huber: delta must be positive, got " + std::to_string(v));
  }
}

double huber_value(double residual, double delta) {
  double r = std::fabs(residual);
  return r <= delta ? 0.5 * residual * residual : delta * (r - 0.5 * delta);
}

TensorPtr huber_loss(Tape& tape, const TensorPtr& y, const TensorPtr& y_hat,
                     const HuberDelta& delta) {
  if (y->shape() != y_hat->shape()) {
    throw std::invalid_argument("shape: huber_loss got " + shape_to_string(y->shape()) + " and " +
                                shape_to_string(y_hat->shape()));
  }
  const std::int64_t n = y->numel();
  if (n == 0) throw std::invalid_argument("huber: empty input");

  const auto yv = y->data();
  const auto pv = y_hat->data();
  const double d = delta.value;
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) total += huber_value(yv[i] - pv[i], d);
  TensorPtr loss =
      Tensor::scalar(total / static_cast<double>(n), y->requires_grad() || y_hat->requires_grad());
  if (loss->requires_grad()) {
    tape.record(loss, [y, y_hat, loss, d, n] {
      const double g = loss->grad()[0] / static_cast<double>(n);
      const auto yv = y->data();
      const auto pv = y_hat->data();
      // d/dr of the per-sample penalty is r clipped to [-delta, delta].
      std::vector<double> clipped(static_cast<std::size_t>(n), 0.0);
      for (std::int64_t i = 0; i < n; ++i) {
        double r = yv[i] - pv[i];
        clipped[i] = g * std::clamp(r, -d, d);
      }
      if (y->requires_grad()) y->accumulate_grad(clipped);
      if (y_hat->requires_grad()) {
        for (double& v : clipped) v = -v;
        y_hat->accumulate_grad(clipped);
      }
    });
  }
  return loss;
}

double mse(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw std::invalid_argument("metrics: length mismatch, " + std::to_string(y.size()) + " vs " +
                                std::to_string(y_hat.size()));
  }
  if (y.empty()) throw std::invalid_argument("metrics: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double r = y[i] - y_hat[i];
    total += r * r;
  }
  return total / static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  return std::sqrt(mse(y, y_hat));
}

}  // namespace avocast
