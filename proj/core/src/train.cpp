#include "avocast/train.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "avocast/rng.hpp"

namespace avocast {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("config: learning_rate must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw std::invalid_argument("config: adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw std::invalid_argument("config: adam_epsilon must be > 0");
  if (!(huber_delta > 0.0)) throw std::invalid_argument("config: huber_delta must be > 0");
  if (early_stop_patience < 0) {
    throw std::invalid_argument("config: early_stop_patience must be >= 0");
  }
}

AdamState AdamState::init(std::span<const TensorPtr> params) {
  AdamState state;
  for (const TensorPtr& p : params) {
    state.m.emplace_back(static_cast<std::size_t>(p->numel()), 0.0);
    state.v.emplace_back(static_cast<std::size_t>(p->numel()), 0.0);
  }
  return state;
}

void adam_step(std::span<const TensorPtr> params, AdamState& state, const TrainConfig& tc) {
  if (state.m.size() != params.size()) {
    throw std::invalid_argument("train: adam state does not match the parameter list");
  }
  ++state.step;
  const double b1 = tc.adam_beta1, b2 = tc.adam_beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i]->mutable_data();
    const bool has_grad = params[i]->has_grad();
    const auto grad = has_grad ? params[i]->grad() : std::span<const double>();
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double g = has_grad ? grad[j] : 0.0;
      m[j] = b1 * m[j] + (1.0 - b1) * g;
      v[j] = b2 * v[j] + (1.0 - b2) * g * g;
      values[j] -= tc.learning_rate * (m[j] / corr1) / (std::sqrt(v[j] / corr2) + tc.adam_epsilon);
    }
  }
}

namespace {

double mean_huber(const ModelConfig& cfg, const ModelParams& params,
                  std::span<const WindowedSample> samples, double delta) {
  double total = 0.0;
  for (const WindowedSample& s : samples) {
    total += huber_value(s.target_std - predict(cfg, params, s.window), delta);
  }
  return total / static_cast<double>(samples.size());
}

}  // namespace

std::pair<ModelParams, TrainReport> train(const ModelConfig& cfg, const ModelParams& initial,
                                          std::span<const WindowedSample> train_samples,
                                          std::span<const WindowedSample> val_samples,
                                          const TrainConfig& tc,
                                          const ColumnScaling& target_scale) {
  tc.validate();
  cfg.validate();
  if (train_samples.empty()) throw std::invalid_argument("train: empty training set");

  const auto started = std::chrono::steady_clock::now();
  ModelParams working = initial.clone();
  const std::vector<TensorPtr> params = working.all();
  AdamState state = AdamState::init(params);
  Rng shuffle_rng(tc.seed);
  const HuberDelta delta(tc.huber_delta);

  TrainReport report;
  ModelParams best;
  double best_val = std::numeric_limits<double>::infinity();
  std::int64_t epochs_since_best = 0;

  const std::size_t n = train_samples.size();
  const std::size_t batch = static_cast<std::size_t>(tc.batch_size);
  for (std::int64_t epoch = 1; epoch <= tc.epochs; ++epoch) {
    const std::vector<std::size_t> order = shuffle_rng.permutation(n);
    std::vector<double> sample_losses(n, 0.0);
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t end = std::min(n, begin + batch);
      try {
        Tape tape;
        std::vector<TensorPtr> preds;
        std::vector<double> targets;
        preds.reserve(end - begin);
        targets.reserve(end - begin);
        for (std::size_t k = begin; k < end; ++k) {
          const WindowedSample& s = train_samples[order[k]];
          preds.push_back(model_forward(tape, s.window, cfg, working));
          targets.push_back(s.target_std);
        }
        TensorPtr y = Tensor::vector(std::move(targets));
        TensorPtr y_hat = stack_scalars(tape, preds);
        TensorPtr loss = huber_loss(tape, y, y_hat, delta);
        backward(tape, loss);
        adam_step(params, state, tc);
        working.clear_grads();
        for (std::size_t k = begin; k < end; ++k) {
          const WindowedSample& s = train_samples[order[k]];
          sample_losses[order[k]] =
              huber_value(s.target_std - preds[k - begin]->value(), delta.value);
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("train: aborted at epoch " + std::to_string(epoch) + ", batch " +
                                 std::to_string(begin / batch) + ": " + e.what());
      }
    }

    // Reduce in sample order, not batch order, so the curve is invariant to
    // the shuffle.
    double epoch_loss = 0.0;
    for (double l : sample_losses) epoch_loss += l;
    epoch_loss /= static_cast<double>(n);
    report.train_loss.push_back(epoch_loss);
    report.epochs_run = epoch;

    if (!val_samples.empty()) {
      const double val = mean_huber(cfg, working, val_samples, delta.value);
      report.val_loss.push_back(val);
      if (val < best_val) {
        best_val = val;
        best = working.clone();
        report.best_epoch = epoch;
        epochs_since_best = 0;
      } else {
        ++epochs_since_best;
      }
      if (tc.early_stop_patience > 0 && epochs_since_best >= tc.early_stop_patience) break;
    }
  }

  ModelParams chosen;
  if (!val_samples.empty() && report.best_epoch > 0) {
    chosen = std::move(best);
  } else {
    chosen = std::move(working);
    report.best_epoch = report.epochs_run;
  }

  std::span<const WindowedSample> metric_set = val_samples.empty() ? train_samples : val_samples;
  std::vector<double> actual, predicted;
  actual.reserve(metric_set.size());
  predicted.reserve(metric_set.size());
  for (const WindowedSample& s : metric_set) {
    actual.push_back(s.target_raw);
    predicted.push_back(predict(cfg, chosen, s.window) * target_scale.stddev + target_scale.mean);
  }
  report.final_mse = mse(actual, predicted);
  report.final_rmse = rmse(actual, predicted);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(chosen), report};
}

void write_loss_curve_csv(const TrainReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  auto fmt = [](double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
  };
  out << "epoch,train_loss,val_loss\n";
  for (std::size_t i = 0; i < report.train_loss.size(); ++i) {
    out << (i + 1) << ',' << fmt(report.train_loss[i]) << ',';
    if (i < report.val_loss.size()) out << fmt(report.val_loss[i]);
    out << '\n';
  }
}

}  // namespace avocast
