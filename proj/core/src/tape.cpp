#include "avocast/tape.hpp"

#include <algorithm>
#include <stdexcept>

namespace avocast {

void Tape::backward(const TensorPtr& loss) {
  if (!loss) throw std::invalid_argument("backward: null loss tensor");
  if (!loss->is_scalar()) {
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                shape_to_string(loss->shape()));
  }
  if (!loss->requires_grad()) return;  // only constants upstream, nothing to do

  bool recorded = std::any_of(nodes_.begin(), nodes_.end(),
                              [&](const Node& n) { return n.output == loss; });
  if (!recorded) {
    throw std::invalid_argument("backward: loss was not produced by an operation on this tape");
  }

  double one = 1.0;
  loss->accumulate_grad(std::span<const double>(&one, 1));
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->output->has_grad()) it->pull();
  }
}

}  // namespace avocast
