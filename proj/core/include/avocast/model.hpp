#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "avocast/loss.hpp"
#include "avocast/ops.hpp"

namespace avocast {

struct TcnConfig {
  std::int64_t input_channels = 0;  // feature dimension F, set from the data
  std::int64_t hidden_channels = 16;
  std::int64_t num_blocks = 3;
  std::int64_t kernel_size = 3;
  std::int64_t dilation_base = 2;

  // 1 + (K-1) * sum of base^i over the blocks; how far back one output
  // column can see.
  std::int64_t receptive_field() const;
  std::int64_t dilation_of_block(std::int64_t block) const;
  void validate(std::int64_t window_len) const;
};

struct ModelConfig {
  TcnConfig tcn;
  std::int64_t window_len = 12;  // L, weekly steps
  std::int64_t mlp_hidden = 32;  // d_mlp
  std::int64_t hidden_dim = 16;  // d_h
  std::int64_t attn_dim = 16;    // d_a

  void validate() const;
};

struct TcnBlockParams {
  TensorPtr kernel;         // [C_out x C_in x K]
  TensorPtr bias;           // [C_out]
  TensorPtr residual_proj;  // [C_out x C_in x 1], null when channels already match
};

// Every learnable weight of the network. Tensors are shared; clone() before
// mutating a copy.
struct ModelParams {
  std::vector<TcnBlockParams> blocks;
  TensorPtr mlp_w1, mlp_b1;  // [d_mlp x C], [d_mlp]
  TensorPtr mlp_w2, mlp_b2;  // [d_h x d_mlp], [d_h]
  TensorPtr attn_w;          // [d_a x d_h]
  TensorPtr attn_b;          // [d_a]
  TensorPtr attn_v;          // [d_a]
  TensorPtr out_w;           // [1 x d_h]
  TensorPtr out_b;           // [1]

  std::vector<TensorPtr> all() const;
  std::vector<std::pair<std::string, TensorPtr>> named() const;
  ModelParams clone() const;
  void clear_grads() const;
};

// Glorot-uniform weights, zero biases, fully determined by the seed.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

// Residual stack of dilated causal conv blocks; block i applies
// ReLU(conv(h) + bias) + project(h) with dilation base^i. Output keeps the
// input length and never reads future columns.
TensorPtr tcn_forward(Tape& tape, const TensorPtr& x, const TcnConfig& cfg,
                      const ModelParams& params);

// W2 * ReLU(W1 * h + b1) + b2 on a single feature vector.
TensorPtr mlp_forward(Tape& tape, const TensorPtr& h, const ModelParams& params);

// The same MLP applied independently to every column of [C x L].
TensorPtr mlp_forward_seq(Tape& tape, const TensorPtr& h_seq, const ModelParams& params);

struct AttentionResult {
  TensorPtr context;  // [d_h]
  TensorPtr alpha;    // [L], nonnegative, sums to 1
};

// score_t = v^T tanh(W h_t + b); alpha = softmax over time; context is the
// alpha-weighted sum of the columns.
AttentionResult attention_pool(Tape& tape, const TensorPtr& h_seq, const ModelParams& params);

// Full composition: affine head over the attention pooling of the MLP-mapped
// TCN features. Returns a scalar in standardized-target units.
TensorPtr model_forward(Tape& tape, const TensorPtr& x, const ModelConfig& cfg,
                        const ModelParams& params);

// Forward pass on a throwaway tape; the plain-number variant for inference.
double predict(const ModelConfig& cfg, const ModelParams& params, const TensorPtr& window);

}  // namespace avocast
