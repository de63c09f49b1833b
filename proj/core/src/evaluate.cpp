#include "avocast/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "avocast/loss.hpp"

namespace avocast {

namespace {

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

EvalResult evaluate(const ModelConfig& cfg, const ModelParams& params,
                    std::span<const WindowedSample> samples, const FeatureSpec& spec) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty sample set");
  EvalResult result;
  std::vector<double> actual, predicted;
  actual.reserve(samples.size());
  predicted.reserve(samples.size());
  for (const WindowedSample& s : samples) {
    const double usd = spec.decode_target(predict(cfg, params, s.window));
    actual.push_back(s.target_raw);
    predicted.push_back(usd);
    result.rows.push_back({s.target_date, s.region, s.type, s.target_raw, usd});
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const PredictionRow& a, const PredictionRow& b) {
                     return std::tie(a.date, a.region, a.type) <
                            std::tie(b.date, b.region, b.type);
                   });
  result.mse = mse(actual, predicted);
  result.rmse = rmse(actual, predicted);
  result.n_samples = static_cast<std::int64_t>(samples.size());
  return result;
}

void export_prediction_series(std::span<const PredictionRow> rows,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  out << "date,region,type,actual,predicted\n";
  for (const PredictionRow& r : rows) {
    out << r.date.to_string() << ',' << r.region << ',' << to_string(r.type) << ','
        << format_double(r.actual) << ',' << format_double(r.predicted) << '\n';
  }
  if (!out) throw std::runtime_error("io: failed writing '" + path.string() + "'");
}

void write_metrics_json(const EvalResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  out << "{\n"
      << "  \"mse\": " << format_double(result.mse) << ",\n"
      << "  \"rmse\": " << format_double(result.rmse) << ",\n"
      << "  \"n_samples\": " << result.n_samples << "\n"
      << "}\n";
}

}  // namespace avocast
