#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "avocast/checkpoint.hpp"
#include "avocast/data.hpp"
#include "avocast/evaluate.hpp"
#include "avocast/gradcheck.hpp"
#include "avocast/loss.hpp"
#include "avocast/model.hpp"
#include "avocast/rng.hpp"
#include "avocast/train.hpp"

namespace fs = std::filesystem;
using namespace avocast;

namespace {

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  SplitRatios ratios;
};

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config: cannot parse value '" + text + "' for key '" + key + "'");
  }
  return v;
}

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "window_len") cfg.model.window_len = parse_number<std::int64_t>(key, value);
  else if (key == "hidden_channels") cfg.model.tcn.hidden_channels = parse_number<std::int64_t>(key, value);
  else if (key == "num_blocks") cfg.model.tcn.num_blocks = parse_number<std::int64_t>(key, value);
  else if (key == "kernel_size") cfg.model.tcn.kernel_size = parse_number<std::int64_t>(key, value);
  else if (key == "dilation_base") cfg.model.tcn.dilation_base = parse_number<std::int64_t>(key, value);
  else if (key == "mlp_hidden") cfg.model.mlp_hidden = parse_number<std::int64_t>(key, value);
  else if (key == "hidden_dim") cfg.model.hidden_dim = parse_number<std::int64_t>(key, value);
  else if (key == "attn_dim") cfg.model.attn_dim = parse_number<std::int64_t>(key, value);
  else if (key == "epochs") cfg.train.epochs = parse_number<std::int64_t>(key, value);
  else if (key == "batch_size") cfg.train.batch_size = parse_number<std::int64_t>(key, value);
  else if (key == "learning_rate") cfg.train.learning_rate = parse_number<double>(key, value);
  else if (key == "adam_beta1") cfg.train.adam_beta1 = parse_number<double>(key, value);
  else if (key == "adam_beta2") cfg.train.adam_beta2 = parse_number<double>(key, value);
  else if (key == "adam_epsilon") cfg.train.adam_epsilon = parse_number<double>(key, value);
  else if (key == "huber_delta") cfg.train.huber_delta = parse_number<double>(key, value);
  else if (key == "seed") cfg.train.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "early_stop_patience") cfg.train.early_stop_patience = parse_number<std::int64_t>(key, value);
  else if (key == "train_ratio") cfg.ratios.train = parse_number<double>(key, value);
  else if (key == "val_ratio") cfg.ratios.val = parse_number<double>(key, value);
  else if (key == "test_ratio") cfg.ratios.test = parse_number<double>(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open config '" + path + "'");
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not a key=value pair");
    }
    auto strip = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_line(cfg, strip(line.substr(start, eq - start)), strip(line.substr(eq + 1)));
  }
  return cfg;
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "window_len=" << cfg.model.window_len << '\n'
      << "hidden_channels=" << cfg.model.tcn.hidden_channels << '\n'
      << "num_blocks=" << cfg.model.tcn.num_blocks << '\n'
      << "kernel_size=" << cfg.model.tcn.kernel_size << '\n'
      << "dilation_base=" << cfg.model.tcn.dilation_base << '\n'
      << "mlp_hidden=" << cfg.model.mlp_hidden << '\n'
      << "hidden_dim=" << cfg.model.hidden_dim << '\n'
      << "attn_dim=" << cfg.model.attn_dim << '\n'
      << "epochs=" << cfg.train.epochs << '\n'
      << "batch_size=" << cfg.train.batch_size << '\n'
      << "learning_rate=" << format_double(cfg.train.learning_rate) << '\n'
      << "adam_beta1=" << format_double(cfg.train.adam_beta1) << '\n'
      << "adam_beta2=" << format_double(cfg.train.adam_beta2) << '\n'
      << "adam_epsilon=" << format_double(cfg.train.adam_epsilon) << '\n'
      << "huber_delta=" << format_double(cfg.train.huber_delta) << '\n'
      << "seed=" << cfg.train.seed << '\n'
      << "early_stop_patience=" << cfg.train.early_stop_patience << '\n'
      << "train_ratio=" << format_double(cfg.ratios.train) << '\n'
      << "val_ratio=" << format_double(cfg.ratios.val) << '\n'
      << "test_ratio=" << format_double(cfg.ratios.test) << '\n';
  return out.str();
}

void print_load_summary(const LoadReport& report) {
  std::cout << "rows: " << report.rows << '\n';
  for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
    std::cout << "missing[" << kNumericColumns[c] << "]: " << report.missing_counts[c] << '\n';
  }
}

void print_clean_summary(const CleanReport& report) {
  std::cout << "dropped_sentinel: " << report.dropped_sentinel << '\n'
            << "dropped_nonpositive_price: " << report.dropped_nonpositive_price << '\n'
            << "rows_clean: " << report.rows_out << '\n';
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_gen(const std::string& out, std::int64_t regions, std::int64_t weeks, std::uint64_t seed) {
  RecordTable table = gen_synthetic(regions, weeks, seed);
  write_table_csv(table, out);
  std::cout << "wrote " << table.rows.size() << " rows to " << out << '\n';
  return 0;
}

int cmd_stats(const std::string& data, const std::string& out, const std::string& out_cleaned) {
  LoadResult loaded = load_csv(data);
  print_load_summary(loaded.report);
  CleanResult cleaned = clean(loaded.table);
  print_clean_summary(cleaned.report);

  const std::vector<std::string> columns = {"Date", "AveragePrice", "4046",    "4225",
                                            "4770", "Salesvolume",  "weather", "year"};
  CorrelationMatrix corr = correlation_matrix(cleaned.table, columns);
  write_correlation_csv(corr, out);
  std::cout << "wrote correlation matrix to " << out << '\n';
  if (!out_cleaned.empty()) {
    write_table_csv(cleaned.table, out_cleaned);
    std::cout << "wrote cleaned table to " << out_cleaned << '\n';
  }
  return 0;
}

int cmd_train(const std::string& data, const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  const std::string resolved = resolved_config_text(cfg);
  std::cout << "resolved config:\n" << resolved;

  LoadResult loaded = load_csv(data);
  print_load_summary(loaded.report);
  CleanResult cleaned = clean(loaded.table);
  print_clean_summary(cleaned.report);

  Dataset dataset = prepare_dataset(cleaned.table, cfg.model.window_len, cfg.ratios);
  print_warnings(dataset.warnings);
  cfg.model.tcn.input_channels = dataset.spec.feature_dim();
  std::cout << "features: " << dataset.spec.feature_dim() << ", train/val/test: "
            << dataset.split.train.size() << '/' << dataset.split.val.size() << '/'
            << dataset.split.test.size() << '\n';

  ModelParams initial = init_params(cfg.model, cfg.train.seed);
  auto [params, report] =
      train(cfg.model, initial, dataset.split.train, dataset.split.val, cfg.train,
            dataset.spec.target_scaling());

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  save_checkpoint({cfg.model, cfg.ratios, dataset.spec, params, resolved}, dir / "checkpoint.bin");
  write_loss_curve_csv(report, dir / "loss_curve.csv");
  {
    std::ofstream txt(dir / "train_report.txt");
    txt << "epochs_run=" << report.epochs_run << '\n'
        << "best_epoch=" << report.best_epoch << '\n'
        << "final_mse_usd=" << format_double(report.final_mse) << '\n'
        << "final_rmse_usd=" << format_double(report.final_rmse) << '\n'
        << "wall_seconds=" << format_double(report.wall_seconds) << '\n'
        << "n_train=" << dataset.split.train.size() << '\n'
        << "n_val=" << dataset.split.val.size() << '\n'
        << "n_test=" << dataset.split.test.size() << '\n';
  }
  {
    std::ofstream txt(dir / "config_resolved.txt");
    txt << resolved;
  }
  std::cout << "best_epoch: " << report.best_epoch << ", final_rmse_usd: "
            << format_double(report.final_rmse) << '\n'
            << "wrote checkpoint.bin, loss_curve.csv, train_report.txt, config_resolved.txt to "
            << out_dir << '\n';
  return 0;
}

int cmd_evaluate(const std::string& data, const std::string& checkpoint_path,
                 const std::string& out_dir) {
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  LoadResult loaded = load_csv(data);
  CleanResult cleaned = clean(loaded.table);

  std::vector<std::string> warnings;
  auto series = group_series(cleaned.table, &warnings);
  std::vector<WindowedSample> samples;
  for (const auto& [key, rows] : series) {
    auto s = make_windows(rows, ckpt.spec, ckpt.config.window_len, &warnings);
    samples.insert(samples.end(), std::make_move_iterator(s.begin()),
                   std::make_move_iterator(s.end()));
  }
  print_warnings(warnings);
  DataSplit split = split_chronological(std::move(samples), ckpt.ratios);
  if (split.test.empty()) throw std::runtime_error("evaluate: test split is empty");

  EvalResult result = evaluate(ckpt.config, ckpt.params, split.test, ckpt.spec);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  export_prediction_series(result.rows, dir / "predictions.csv");
  write_metrics_json(result, dir / "metrics.json");
  std::cout << "n_samples: " << result.n_samples << '\n'
            << "mse_usd: " << format_double(result.mse) << '\n'
            << "rmse_usd: " << format_double(result.rmse) << '\n'
            << "wrote predictions.csv, metrics.json to " << out_dir << '\n';
  return 0;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& window_path) {
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  LoadResult loaded = load_csv(window_path);
  CleanResult cleaned = clean(loaded.table);
  if (cleaned.report.dropped_sentinel + cleaned.report.dropped_nonpositive_price > 0) {
    std::cerr << "warning: cleaning dropped "
              << cleaned.report.dropped_sentinel + cleaned.report.dropped_nonpositive_price
              << " rows from the window file\n";
  }

  std::vector<std::string> warnings;
  auto series = group_series(cleaned.table, &warnings);
  if (series.size() != 1) {
    throw std::runtime_error("predict: window file must hold exactly one (region, type) series, got " +
                             std::to_string(series.size()));
  }
  const auto& rows = series.begin()->second;
  const std::int64_t window_len = ckpt.config.window_len;
  if (static_cast<std::int64_t>(rows.size()) < window_len) {
    throw std::runtime_error("predict: window file has " + std::to_string(rows.size()) +
                             " usable rows, the model needs " + std::to_string(window_len));
  }
  std::span<const RawRecord> tail(rows.data() + rows.size() - window_len,
                                  static_cast<std::size_t>(window_len));
  Matrix encoded = ckpt.spec.encode(tail, &warnings);
  print_warnings(warnings);
  TensorPtr window = Tensor::matrix(encoded.rows, encoded.cols, std::move(encoded.values));
  const double usd = ckpt.spec.decode_target(predict(ckpt.config, ckpt.params, window));
  std::cout << format_double(usd) << '\n';
  return 0;
}

int cmd_gradcheck(std::uint64_t seed) {
  // Small model, a handful of samples, every parameter checked against
  // central differences.
  ModelConfig cfg;
  cfg.tcn.input_channels = 2;
  cfg.tcn.hidden_channels = 3;
  cfg.tcn.num_blocks = 1;
  cfg.tcn.kernel_size = 4;
  cfg.tcn.dilation_base = 2;
  cfg.window_len = 4;
  cfg.mlp_hidden = 3;
  cfg.hidden_dim = 2;
  cfg.attn_dim = 2;

  ModelParams params = init_params(cfg, seed);
  Rng rng(seed + 1);
  std::vector<TensorPtr> windows;
  std::vector<double> targets;
  for (int s = 0; s < 3; ++s) {
    std::vector<double> values(static_cast<std::size_t>(cfg.tcn.input_channels * cfg.window_len));
    for (double& v : values) v = rng.uniform(-1.0, 1.0);
    windows.push_back(Tensor::matrix(cfg.tcn.input_channels, cfg.window_len, std::move(values)));
    targets.push_back(rng.uniform(-1.0, 1.0));
  }

  auto build_loss = [&](Tape& tape) {
    std::vector<TensorPtr> preds;
    for (const TensorPtr& w : windows) preds.push_back(model_forward(tape, w, cfg, params));
    TensorPtr y = Tensor::vector(targets);
    TensorPtr y_hat = stack_scalars(tape, preds);
    return huber_loss(tape, y, y_hat, HuberDelta(1.0));
  };

  GradCheckReport report = check_gradients(params.named(), build_loss);
  std::cout << "checked " << report.elements_checked << " parameter gradients\n"
            << "max_rel_error: " << format_double(report.max_rel_error) << " (tolerance "
            << format_double(report.rel_tolerance) << ")\n"
            << "worst: " << (report.worst_tensor.empty() ? "-" : report.worst_tensor) << '\n'
            << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCN-MLP-Attention forecaster for weekly avocado retail prices"};
  app.require_subcommand(1);

  std::string out, data, config_path, checkpoint_path, out_dir, window_path, out_cleaned;
  std::int64_t regions = 5, weeks = 200;
  std::uint64_t seed = 42;

  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic dataset CSV");
  gen->add_option("--out", out, "Output CSV path")->required();
  gen->add_option("--regions", regions, "Number of regions");
  gen->add_option("--weeks", weeks, "Weeks per series");
  gen->add_option("--seed", seed, "Generator seed");

  CLI::App* stats = app.add_subcommand("stats", "Clean a dataset and write its correlation matrix");
  stats->add_option("--data", data, "Input CSV path")->required();
  stats->add_option("--out", out, "Correlation matrix CSV path")->required();
  stats->add_option("--out-cleaned", out_cleaned, "Optional cleaned-table echo CSV path");

  CLI::App* train_cmd = app.add_subcommand("train", "Train a model end-to-end");
  train_cmd->add_option("--data", data, "Input CSV path")->required();
  train_cmd->add_option("--config", config_path, "key=value config file (all keys optional)");
  train_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on the test split");
  eval_cmd->add_option("--data", data, "Input CSV path")->required();
  eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint path")->required();
  eval_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  CLI::App* predict_cmd = app.add_subcommand("predict", "Predict the next week from a window CSV");
  predict_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint path")->required();
  predict_cmd->add_option("--window", window_path, "CSV with the latest rows of one series")
      ->required();

  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "Check model gradients against finite differences");
  gradcheck_cmd->add_option("--seed", seed, "Seed for the checked instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(out, regions, weeks, seed);
    if (stats->parsed()) return cmd_stats(data, out, out_cleaned);
    if (train_cmd->parsed()) return cmd_train(data, config_path, out_dir);
    if (eval_cmd->parsed()) return cmd_evaluate(data, checkpoint_path, out_dir);
    if (predict_cmd->parsed()) return cmd_predict(checkpoint_path, window_path);
    if (gradcheck_cmd->parsed()) return cmd_gradcheck(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
