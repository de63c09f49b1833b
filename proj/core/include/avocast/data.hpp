#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avocast/tensor.hpp"

namespace avocast {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  static Date parse(std::string_view iso);  // strict YYYY-MM-DD
  static Date from_ordinal(std::int64_t days_since_epoch);
  std::int64_t ordinal() const;  // days since 1970-01-01
  std::string to_string() const;
  auto operator<=>(const Date&) const = default;
};

enum class AvocadoType { conventional, organic };

std::string_view to_string(AvocadoType type);
AvocadoType parse_avocado_type(std::string_view text);

// One weekly observation in the retail schema.
struct RawRecord {
  Date date;
  double average_price = 0.0;
  AvocadoType type = AvocadoType::conventional;
  int year = 0;
  std::string region;
  double plu4046 = 0.0;
  double plu4225 = 0.0;
  double plu4770 = 0.0;
  double sales_volume = 0.0;
  double weather = 0.0;

  bool operator==(const RawRecord&) const = default;
};

struct RecordTable {
  std::vector<RawRecord> rows;
};

inline constexpr std::array<const char*, 6> kNumericColumns = {
    "AveragePrice", "4046", "4225", "4770", "Salesvolume", "weather"};

double numeric_field(const RawRecord& row, std::size_t column);

// The -99 placeholder marks a missing value throughout the schema.
inline constexpr double kMissingSentinel = -99.0;

struct LoadReport {
  std::int64_t rows = 0;
  // Occurrences of the missing-value sentinel, per numeric column.
  std::array<std::int64_t, kNumericColumns.size()> missing_counts{};
};

struct LoadResult {
  RecordTable table;
  LoadReport report;
};

// Parses a comma-separated file with the retail header (case-insensitive,
// any column order). A missing or unexpected column is a schema error; an
// unparseable cell is a row error carrying the 1-based line number.
LoadResult load_csv(const std::filesystem::path& path);
LoadResult load_csv_text(std::string_view text);

void write_table_csv(const RecordTable& table, const std::filesystem::path& path);

struct CleanReport {
  std::int64_t rows_in = 0;
  std::int64_t dropped_sentinel = 0;
  std::int64_t dropped_nonpositive_price = 0;
  std::int64_t rows_out = 0;
};

struct CleanResult {
  RecordTable table;
  CleanReport report;
};

// Drops every row carrying the -99 sentinel in any numeric column, then rows
// with a non-positive price. Erroring out when nothing survives.
CleanResult clean(const RecordTable& table);

struct ColumnScaling {
  double mean = 0.0;
  double stddev = 1.0;
  bool operator==(const ColumnScaling&) const = default;
};

struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> values;  // row-major

  double& at(std::int64_t r, std::int64_t c) { return values[static_cast<std::size_t>(r * cols + c)]; }
  double at(std::int64_t r, std::int64_t c) const {
    return values[static_cast<std::size_t>(r * cols + c)];
  }
};

// Frozen encoding recipe: z-scores for the numeric columns (population
// stddev, training rows only) and one-hot vocabularies for type and region.
// Feature order is numerics first, then type, then region, both vocabularies
// sorted.
class FeatureSpec {
public:
  static FeatureSpec fit(std::span<const RawRecord> train_rows);

  std::int64_t feature_dim() const;
  std::vector<std::string> feature_names() const;
  const std::array<ColumnScaling, kNumericColumns.size()>& numeric_scalings() const {
    return numeric_;
  }
  const std::vector<std::string>& type_vocabulary() const { return type_vocab_; }
  const std::vector<std::string>& region_vocabulary() const { return region_vocab_; }

  // Targets share the AveragePrice scaling.
  const ColumnScaling& target_scaling() const { return numeric_[0]; }
  double encode_target(double usd) const;
  double decode_target(double z) const;

  // Feature matrix [F x T] for one time-ordered series. Unseen categories
  // encode as an all-zero block and append a warning.
  Matrix encode(std::span<const RawRecord> series, std::vector<std::string>* warnings) const;

  bool operator==(const FeatureSpec&) const = default;

  // Checkpoint serialization hooks.
  static FeatureSpec from_parts(std::array<ColumnScaling, kNumericColumns.size()> numeric,
                                std::vector<std::string> type_vocab,
                                std::vector<std::string> region_vocab);

private:
  std::array<ColumnScaling, kNumericColumns.size()> numeric_{};
  std::vector<std::string> type_vocab_;
  std::vector<std::string> region_vocab_;
};

// Supervised sample: L consecutive weekly feature vectors of one
// (region, type) series and the standardized price of the following week.
struct WindowedSample {
  TensorPtr window;  // [F x L]
  double target_std = 0.0;
  double target_raw = 0.0;
  Date target_date;
  std::string region;
  AvocadoType type = AvocadoType::conventional;
};

struct SeriesKey {
  std::string region;
  AvocadoType type = AvocadoType::conventional;
  auto operator<=>(const SeriesKey&) const = default;
};

// Rows regrouped into per-(region, type) series sorted by date; a repeated
// date within a series keeps the first row and warns.
std::map<SeriesKey, std::vector<RawRecord>> group_series(const RecordTable& table,
                                                          std::vector<std::string>* warnings);

// One sample per position with L history steps and one target step. A series
// shorter than L+1 yields nothing and a warning.
std::vector<WindowedSample> make_windows(std::span<const RawRecord> series,
                                         const FeatureSpec& spec, std::int64_t window_len,
                                         std::vector<std::string>* warnings);

struct SplitRatios {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;
  void validate() const;
};

struct DataSplit {
  std::vector<WindowedSample> train;
  std::vector<WindowedSample> val;
  std::vector<WindowedSample> test;
};

// Orders samples by target date (region/type as tie-break) and cuts by the
// ratios, earliest into train. Never shuffles across time.
DataSplit split_chronological(std::vector<WindowedSample> samples, const SplitRatios& ratios);

// Full preparation pipeline on a cleaned table: pick the chronological cut,
// fit the feature spec on rows dated at or before the training cutoff,
// encode, window, split.
struct Dataset {
  DataSplit split;
  FeatureSpec spec;
  Date train_cutoff;
  std::vector<std::string> warnings;
};

Dataset prepare_dataset(const RecordTable& cleaned, std::int64_t window_len,
                        const SplitRatios& ratios);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Matrix values;  // NaN marks an undefined entry (zero-variance column)
  bool defined(std::int64_t i, std::int64_t j) const;
};

// Pearson correlations between the named columns; "Date" means the date
// ordinal and "year" the year number, the rest are the numeric columns.
CorrelationMatrix correlation_matrix(const RecordTable& table,
                                     std::span<const std::string> columns);

void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path);

// Weekly price drift built into the synthetic generator, exposed so tests can
// recover it by regression.
inline constexpr double kSyntheticTrendPerWeek = 0.0015;

// Deterministic desk-scale stand-in for the retail dataset: weekly series per
// (region, type) with seasonal cycles, a mild upward trend, organic priced
// above conventional, and volumes moving against price.
RecordTable gen_synthetic(std::int64_t num_regions, std::int64_t weeks, std::uint64_t seed);

}  // namespace avocast
