#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace avocast {

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

std::string shape_to_string(std::span<const std::int64_t> shape);

// Dense row-major array of 64-bit floats, the currency of all math here.
// Values are fixed once built; the two sanctioned mutations are gradient
// accumulation during a backward pass and the optimizer's in-place update.
// Non-finite values are rejected at construction so a divergence surfaces
// at the op that produced it.
class Tensor {
public:
  static TensorPtr create(std::vector<std::int64_t> shape, std::vector<double> data,
                          bool requires_grad = false);
  static TensorPtr zeros(std::vector<std::int64_t> shape, bool requires_grad = false);
  static TensorPtr scalar(double value, bool requires_grad = false);
  static TensorPtr vector(std::vector<double> data, bool requires_grad = false);
  static TensorPtr matrix(std::int64_t rows, std::int64_t cols, std::vector<double> data,
                          bool requires_grad = false);

  const std::vector<std::int64_t>& shape() const { return shape_; }
  std::int64_t ndim() const { return static_cast<std::int64_t>(shape_.size()); }
  std::int64_t dim(std::int64_t axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }
  bool is_scalar() const { return data_.size() == 1; }

  std::span<const double> data() const { return data_; }
  // In-place update hook for the optimizer; keep values finite.
  std::span<double> mutable_data() { return data_; }
  double value() const;  // single-element convenience, contract error otherwise

  bool requires_grad() const { return requires_grad_; }
  bool has_grad() const { return grad_.has_value(); }
  std::span<const double> grad() const;
  void accumulate_grad(std::span<const double> delta);
  void clear_grad() { grad_.reset(); }

  Tensor(std::vector<std::int64_t> shape, std::vector<double> data, bool requires_grad);

private:
  std::vector<std::int64_t> shape_;
  std::vector<double> data_;
  std::optional<std::vector<double>> grad_;
  bool requires_grad_;
};

}  // namespace avocast
