#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "avocast/data.hpp"
#include "avocast/model.hpp"

namespace avocast {

struct PredictionRow {
  Date date;
  std::string region;
  AvocadoType type = AvocadoType::conventional;
  double actual = 0.0;     // USD
  double predicted = 0.0;  // USD
};

struct EvalResult {
  double mse = 0.0;   // USD^2
  double rmse = 0.0;  // USD
  std::int64_t n_samples = 0;
  std::vector<PredictionRow> rows;  // sorted by date
};

// Runs the model over the samples, inverse-standardizes the predictions to
// USD, and reports MSE/RMSE in original price units. Leaves params untouched.
EvalResult evaluate(const ModelConfig& cfg, const ModelParams& params,
                    std::span<const WindowedSample> samples, const FeatureSpec& spec);

// date,region,type,actual,predicted - ascending by date, loadable by any
// plotting tool.
void export_prediction_series(std::span<const PredictionRow> rows,
                              const std::filesystem::path& path);

// Flat key/value metrics: mse, rmse, n_samples.
void write_metrics_json(const EvalResult& result, const std::filesystem::path& path);

}  // namespace avocast
