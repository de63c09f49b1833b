#include "avocast/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace avocast {

std::string shape_to_string(std::span<const std::int64_t> shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

namespace {

std::int64_t shape_numel(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (std::int64_t extent : shape) {
    if (extent < 0) throw std::invalid_argument("shape: negative extent in " + shape_to_string(shape));
    n *= extent;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> shape, std::vector<double> data, bool requires_grad)
    : shape_(std::move(shape)), data_(std::move(data)), requires_grad_(requires_grad) {}

TensorPtr Tensor::create(std::vector<std::int64_t> shape, std::vector<double> data,
                         bool requires_grad) {
  std::int64_t expected = shape_numel(shape);
  if (expected != static_cast<std::int64_t>(data.size())) {
    throw std::invalid_argument("shape: " + shape_to_string(shape) + " implies " +
                                std::to_string(expected) + " elements but got " +
                                std::to_string(data.size()));
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("tensor: non-finite value in tensor of shape " +
                                  shape_to_string(shape));
    }
  }
  return std::make_shared<Tensor>(std::move(shape), std::move(data), requires_grad);
}

TensorPtr Tensor::zeros(std::vector<std::int64_t> shape, bool requires_grad) {
  std::int64_t n = shape_numel(shape);
  return std::make_shared<Tensor>(std::move(shape), std::vector<double>(static_cast<std::size_t>(n), 0.0),
                                  requires_grad);
}

TensorPtr Tensor::scalar(double value, bool requires_grad) {
  return create({}, {value}, requires_grad);
}

TensorPtr Tensor::vector(std::vector<double> data, bool requires_grad) {
  std::int64_t n = static_cast<std::int64_t>(data.size());
  return create({n}, std::move(data), requires_grad);
}

TensorPtr Tensor::matrix(std::int64_t rows, std::int64_t cols, std::vector<double> data,
                         bool requires_grad) {
  return create({rows, cols}, std::move(data), requires_grad);
}

double Tensor::value() const {
  if (!is_scalar()) {
    throw std::invalid_argument("tensor: value() on non-scalar tensor of shape " +
                                shape_to_string(shape_));
  }
  return data_[0];
}

std::span<const double> Tensor::grad() const {
  if (!grad_) throw std::logic_error("tensor: gradient not populated");
  return *grad_;
}

void Tensor::accumulate_grad(std::span<const double> delta) {
  if (delta.size() != data_.size()) {
    throw std::logic_error("tensor: gradient length " + std::to_string(delta.size()) +
                           " does not match data length " + std::to_string(data_.size()));
  }
  if (!grad_) grad_.emplace(data_.size(), 0.0);
  for (std::size_t i = 0; i < delta.size(); ++i) (*grad_)[i] += delta[i];
}

}  // namespace avocast
