#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avocast/tape.hpp"
#include "avocast/tensor.hpp"

namespace avocast {

// [m x k] * [k x n] -> [m x n]. Gradient: dA = dC * B^T, dB = A^T * dC.
TensorPtr matmul(Tape& tape, const TensorPtr& a, const TensorPtr& b);

// x: [C_in x T], kernel: [C_out x C_in x K] -> [C_out x T].
// Left zero-padding of (K-1)*dilation keeps the length and makes the output
// at time t depend only on inputs at times <= t.
TensorPtr causal_dilated_conv1d(Tape& tape, const TensorPtr& x, const TensorPtr& kernel,
                                std::int64_t dilation);

TensorPtr relu(Tape& tape, const TensorPtr& x);
TensorPtr tanh_op(Tape& tape, const TensorPtr& x);

// One-axis input; computed with max-subtraction so the exponentials stay
// bounded. Output is a probability vector.
TensorPtr softmax(Tape& tape, const TensorPtr& x);

// Elementwise, equal shapes.
TensorPtr add(Tape& tape, const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(Tape& tape, const TensorPtr& a, const TensorPtr& b);

// out[i,j] = m[i,j] + bias[i]; bias has one entry per row.
TensorPtr add_bias(Tape& tape, const TensorPtr& m, const TensorPtr& bias);

TensorPtr scale(Tape& tape, const TensorPtr& x, double factor);

// Same element count, new extents; gradient passes through untouched.
TensorPtr reshape(Tape& tape, const TensorPtr& x, std::vector<std::int64_t> shape);

// Reduction to a scalar.
TensorPtr sum(Tape& tape, const TensorPtr& x);

// Packs n single-element tensors into a length-n vector.
TensorPtr stack_scalars(Tape& tape, std::span<const TensorPtr> parts);

// d(loss)/d(t) for every requires_grad tensor t reachable from loss.
void backward(Tape& tape, const TensorPtr& loss);

}  // namespace avocast
