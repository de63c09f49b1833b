#include "avocast/model.hpp"

#include <cmath>
#include <stdexcept>

#include "avocast/rng.hpp"

namespace avocast {

std::int64_t TcnConfig::dilation_of_block(std::int64_t block) const {
  std::int64_t d = 1;
  for (std::int64_t i = 0; i < block; ++i) d *= dilation_base;
  return d;
}

std::int64_t TcnConfig::receptive_field() const {
  std::int64_t span = 0;
  for (std::int64_t i = 0; i < num_blocks; ++i) span += dilation_of_block(i);
  return 1 + (kernel_size - 1) * span;
}

void TcnConfig::validate(std::int64_t window_len) const {
  if (input_channels < 1 || hidden_channels < 1 || num_blocks < 1 || kernel_size < 1 ||
      dilation_base < 1) {
    throw std::invalid_argument("config: all TCN counts must be >= 1");
  }
  if (receptive_field() < window_len) {
    throw std::invalid_argument(
        "config: receptive field " + std::to_string(receptive_field()) +
        " is smaller than the window length " + std::to_string(window_len) +
        "; the model cannot see the whole window (raise num_blocks, kernel_size or "
        "dilation_base)");
  }
}

void ModelConfig::validate() const {
  if (window_len < 1 || mlp_hidden < 1 || hidden_dim < 1 || attn_dim < 1) {
    throw std::invalid_argument("config: all model widths must be >= 1");
  }
  tcn.validate(window_len);
}

std::vector<TensorPtr> ModelParams::all() const {
  std::vector<TensorPtr> out;
  for (const auto& [name, t] : named()) out.push_back(t);
  return out;
}

std::vector<std::pair<std::string, TensorPtr>> ModelParams::named() const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string prefix = "tcn.block" + std::to_string(i) + ".";
    out.emplace_back(prefix + "kernel", blocks[i].kernel);
    out.emplace_back(prefix + "bias", blocks[i].bias);
    if (blocks[i].residual_proj) out.emplace_back(prefix + "proj", blocks[i].residual_proj);
  }
  out.emplace_back("mlp.w1", mlp_w1);
  out.emplace_back("mlp.b1", mlp_b1);
  out.emplace_back("mlp.w2", mlp_w2);
  out.emplace_back("mlp.b2", mlp_b2);
  out.emplace_back("attn.w", attn_w);
  out.emplace_back("attn.b", attn_b);
  out.emplace_back("attn.v", attn_v);
  out.emplace_back("out.w", out_w);
  out.emplace_back("out.b", out_b);
  return out;
}

namespace {

TensorPtr clone_tensor(const TensorPtr& t) {
  if (!t) return nullptr;
  return Tensor::create(t->shape(), {t->data().begin(), t->data().end()}, t->requires_grad());
}

}  // namespace

ModelParams ModelParams::clone() const {
  ModelParams copy;
  for (const auto& b : blocks) {
    copy.blocks.push_back(
        {clone_tensor(b.kernel), clone_tensor(b.bias), clone_tensor(b.residual_proj)});
  }
  copy.mlp_w1 = clone_tensor(mlp_w1);
  copy.mlp_b1 = clone_tensor(mlp_b1);
  copy.mlp_w2 = clone_tensor(mlp_w2);
  copy.mlp_b2 = clone_tensor(mlp_b2);
  copy.attn_w = clone_tensor(attn_w);
  copy.attn_b = clone_tensor(attn_b);
  copy.attn_v = clone_tensor(attn_v);
  copy.out_w = clone_tensor(out_w);
  copy.out_b = clone_tensor(out_b);
  return copy;
}

void ModelParams::clear_grads() const {
  for (const TensorPtr& t : all()) t->clear_grad();
}

namespace {

TensorPtr glorot(Rng& rng, std::vector<std::int64_t> shape, std::int64_t fan_in,
                 std::int64_t fan_out) {
  double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::int64_t n = 1;
  for (std::int64_t e : shape) n *= e;
  std::vector<double> data(static_cast<std::size_t>(n), 0.0);
  for (double& v : data) v = rng.uniform(-bound, bound);
  return Tensor::create(std::move(shape), std::move(data), true);
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const auto& t = cfg.tcn;
  ModelParams p;
  for (std::int64_t i = 0; i < t.num_blocks; ++i) {
    std::int64_t c_in = i == 0 ? t.input_channels : t.hidden_channels;
    std::int64_t c_out = t.hidden_channels;
    TcnBlockParams block;
    block.kernel = glorot(rng, {c_out, c_in, t.kernel_size}, c_in * t.kernel_size,
                          c_out * t.kernel_size);
    block.bias = Tensor::zeros({c_out}, true);
    if (c_in != c_out) block.residual_proj = glorot(rng, {c_out, c_in, 1}, c_in, c_out);
    p.blocks.push_back(std::move(block));
  }
  p.mlp_w1 = glorot(rng, {cfg.mlp_hidden, t.hidden_channels}, t.hidden_channels, cfg.mlp_hidden);
  p.mlp_b1 = Tensor::zeros({cfg.mlp_hidden}, true);
  p.mlp_w2 = glorot(rng, {cfg.hidden_dim, cfg.mlp_hidden}, cfg.mlp_hidden, cfg.hidden_dim);
  p.mlp_b2 = Tensor::zeros({cfg.hidden_dim}, true);
  p.attn_w = glorot(rng, {cfg.attn_dim, cfg.hidden_dim}, cfg.hidden_dim, cfg.attn_dim);
  p.attn_b = Tensor::zeros({cfg.attn_dim}, true);
  p.attn_v = glorot(rng, {cfg.attn_dim}, cfg.attn_dim, 1);
  p.out_w = glorot(rng, {1, cfg.hidden_dim}, cfg.hidden_dim, 1);
  p.out_b = Tensor::zeros({1}, true);
  return p;
}

TensorPtr tcn_forward(Tape& tape, const TensorPtr& x, const TcnConfig& cfg,
                      const ModelParams& params) {
  if (x->ndim() != 2 || x->dim(0) != cfg.input_channels) {
    throw std::invalid_argument("shape: tcn input must be [" +
                                std::to_string(cfg.input_channels) + " x L], got " +
                                shape_to_string(x->shape()));
  }
  cfg.validate(x->dim(1));
  if (static_cast<std::int64_t>(params.blocks.size()) != cfg.num_blocks) {
    throw std::invalid_argument("config: params carry " + std::to_string(params.blocks.size()) +
                                " TCN blocks, config wants " + std::to_string(cfg.num_blocks));
  }

  TensorPtr h = x;
  for (std::int64_t i = 0; i < cfg.num_blocks; ++i) {
    const TcnBlockParams& block = params.blocks[static_cast<std::size_t>(i)];
    TensorPtr conv = causal_dilated_conv1d(tape, h, block.kernel, cfg.dilation_of_block(i));
    TensorPtr activated = relu(tape, add_bias(tape, conv, block.bias));
    TensorPtr residual =
        block.residual_proj ? causal_dilated_conv1d(tape, h, block.residual_proj, 1) : h;
    h = add(tape, activated, residual);
  }
  return h;
}

TensorPtr mlp_forward(Tape& tape, const TensorPtr& h, const ModelParams& params) {
  if (h->ndim() != 1) {
    throw std::invalid_argument("shape: mlp_forward expects a vector, got " +
                                shape_to_string(h->shape()));
  }
  TensorPtr column = reshape(tape, h, {h->dim(0), 1});
  TensorPtr out = mlp_forward_seq(tape, column, params);
  return reshape(tape, out, {out->dim(0)});
}

TensorPtr mlp_forward_seq(Tape& tape, const TensorPtr& h_seq, const ModelParams& params) {
  TensorPtr hidden = relu(tape, add_bias(tape, matmul(tape, params.mlp_w1, h_seq), params.mlp_b1));
  return add_bias(tape, matmul(tape, params.mlp_w2, hidden), params.mlp_b2);
}

AttentionResult attention_pool(Tape& tape, const TensorPtr& h_seq, const ModelParams& params) {
  if (h_seq->ndim() != 2 || h_seq->dim(1) < 1) {
    throw std::invalid_argument("attention: needs a nonempty [d_h x L] sequence, got " +
                                shape_to_string(h_seq->shape()));
  }
  const std::int64_t len = h_seq->dim(1);
  TensorPtr keys = tanh_op(tape, add_bias(tape, matmul(tape, params.attn_w, h_seq), params.attn_b));
  TensorPtr v_row = reshape(tape, params.attn_v, {1, params.attn_v->dim(0)});
  TensorPtr scores = reshape(tape, matmul(tape, v_row, keys), {len});
  TensorPtr alpha = softmax(tape, scores);
  TensorPtr context =
      reshape(tape, matmul(tape, h_seq, reshape(tape, alpha, {len, 1})), {h_seq->dim(0)});
  return {context, alpha};
}

TensorPtr model_forward(Tape& tape, const TensorPtr& x, const ModelConfig& cfg,
                        const ModelParams& params) {
  if (x->ndim() != 2 || x->dim(1) != cfg.window_len) {
    throw std::invalid_argument("shape: model input must be [F x " +
                                std::to_string(cfg.window_len) + "], got " +
                                shape_to_string(x->shape()));
  }
  TensorPtr features = tcn_forward(tape, x, cfg.tcn, params);
  TensorPtr hidden = mlp_forward_seq(tape, features, params);
  AttentionResult pooled = attention_pool(tape, hidden, params);
  TensorPtr column = reshape(tape, pooled.context, {pooled.context->dim(0), 1});
  TensorPtr head = add_bias(tape, matmul(tape, params.out_w, column), params.out_b);
  return reshape(tape, head, {});
}

double predict(const ModelConfig& cfg, const ModelParams& params, const TensorPtr& window) {
  Tape tape;
  return model_forward(tape, window, cfg, params)->value();
}

}  // namespace avocast
