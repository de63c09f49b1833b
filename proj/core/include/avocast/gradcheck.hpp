#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avocast/tape.hpp"
#include "avocast/tensor.hpp"

namespace avocast {

struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::int64_t elements_checked = 0;
  std::string worst_tensor;
  double rel_tolerance = 0.0;
  bool passed() const { return max_rel_error <= rel_tolerance; }
};

// Compares reverse-mode gradients against central finite differences. The
// reference side only ever evaluates the forward pass, so it stays
// independent of the gradient rules it is checking. `build_loss` must build
// the same scalar loss from scratch on the tape it is handed; the checked
// tensors are perturbed in place between evaluations and restored after.
//
// An element passes when |analytic - numeric| <= max(abs_floor,
// rel_tol * max(|analytic|, |numeric|)); the floor absorbs finite-difference
// noise around genuinely zero gradients.
GradCheckReport check_gradients(std::span<const std::pair<std::string, TensorPtr>> tensors,
                                const std::function<TensorPtr(Tape&)>& build_loss,
                                double epsilon = 1e-5, double rel_tol = 1e-4,
                                double abs_floor = 1e-9);

}  // namespace avocast
