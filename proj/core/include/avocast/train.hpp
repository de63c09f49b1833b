#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "avocast/data.hpp"
#include "avocast/model.hpp"

namespace avocast {

struct TrainConfig {
  std::int64_t epochs = 100;
  std::int64_t batch_size = 32;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double huber_delta = 1.0;
  std::uint64_t seed = 42;
  std::int64_t early_stop_patience = 0;  // 0 disables early stopping

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_loss;  // one entry per epoch actually run
  std::vector<double> val_loss;    // empty when no validation set
  std::int64_t best_epoch = 0;     // 1-based; 0 when untracked
  std::int64_t epochs_run = 0;
  double final_mse = 0.0;   // USD units, on val when present else train
  double final_rmse = 0.0;  // USD units
  double wall_seconds = 0.0;
};

// Bias-corrected first/second moment state, one slot per parameter tensor.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;

  static AdamState init(std::span<const TensorPtr> params);
};

// One standard Adam update from the gradients currently on the parameters;
// a parameter whose gradient was never populated counts as zero gradient.
void adam_step(std::span<const TensorPtr> params, AdamState& state, const TrainConfig& tc);

// Mini-batch Huber training with a seeded shuffle per epoch. Returns the
// parameters of the best-validation epoch (last epoch when no validation
// set) and the loss trajectory. The run is fully determined by (seed, data,
// config); per-sample losses are reduced in sample order so the reported
// curve does not depend on batch boundaries.
std::pair<ModelParams, TrainReport> train(const ModelConfig& cfg, const ModelParams& initial,
                                          std::span<const WindowedSample> train_samples,
                                          std::span<const WindowedSample> val_samples,
                                          const TrainConfig& tc,
                                          const ColumnScaling& target_scale);

void write_loss_curve_csv(const TrainReport& report, const std::filesystem::path& path);

}  // namespace avocast
