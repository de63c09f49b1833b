#pragma once

#include <functional>
#include <vector>

#include "avocast/tensor.hpp"

namespace avocast {

// Records differentiable operations in execution order. Each node keeps the
// output tensor and a pull closure that reads the output's gradient and
// accumulates into the inputs. A tape and its tensors belong to one thread
// for the duration of a forward/backward pass.
class Tape {
public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void record(TensorPtr output, std::function<void()> pull_gradients) {
    nodes_.push_back(Node{std::move(output), std::move(pull_gradients)});
  }

  // Seeds d(loss)/d(loss) = 1 and propagates in reverse recording order.
  // Every node is visited at most once; gradients sum across reuses of a
  // tensor. Repeated calls accumulate on top of existing gradients.
  void backward(const TensorPtr& loss);

  std::size_t node_count() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

private:
  struct Node {
    TensorPtr output;
    std::function<void()> pull;
  };
  std::vector<Node> nodes_;
};

}  // namespace avocast
