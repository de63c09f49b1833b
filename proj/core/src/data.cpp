#include "avocast/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "avocast/rng.hpp"

namespace avocast {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double_cell(std::string_view cell, std::int64_t line, const char* column) {
  cell = trim(cell);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw std::runtime_error("row: line " + std::to_string(line) + ": cannot parse '" +
                             std::string(cell) + "' as a number for column '" + column + "'");
  }
  return v;
}

int parse_int_cell(std::string_view cell, std::int64_t line, const char* column) {
  cell = trim(cell);
  int v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw std::runtime_error("row: line " + std::to_string(line) + ": cannot parse '" +
                             std::string(cell) + "' as an integer for column '" + column + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  cells.push_back(std::move(current));
  return cells;
}

std::string series_name(const SeriesKey& key) {
  return "(" + key.region + ", " + std::string(to_string(key.type)) + ")";
}

}  // namespace

Date Date::parse(std::string_view iso) {
  iso = trim(iso);
  auto fail = [&] {
    throw std::runtime_error("date: '" + std::string(iso) + "' is not a YYYY-MM-DD date");
  };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') fail();
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(iso[i]))) fail();
  }
  Date d;
  std::from_chars(iso.data(), iso.data() + 4, d.year);
  std::from_chars(iso.data() + 5, iso.data() + 7, d.month);
  std::from_chars(iso.data() + 8, iso.data() + 10, d.day);
  std::chrono::year_month_day ymd{std::chrono::year{d.year},
                                  std::chrono::month{static_cast<unsigned>(d.month)},
                                  std::chrono::day{static_cast<unsigned>(d.day)}};
  if (!ymd.ok()) fail();
  return d;
}

std::int64_t Date::ordinal() const {
  std::chrono::year_month_day ymd{std::chrono::year{year},
                                  std::chrono::month{static_cast<unsigned>(month)},
                                  std::chrono::day{static_cast<unsigned>(day)}};
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

Date Date::from_ordinal(std::int64_t days_since_epoch) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_since_epoch}}};
  return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string_view to_string(AvocadoType type) {
  return type == AvocadoType::conventional ? "conventional" : "organic";
}

AvocadoType parse_avocado_type(std::string_view text) {
  std::string lowered = to_lower(trim(text));
  if (lowered == "conventional") return AvocadoType::conventional;
  if (lowered == "organic") return AvocadoType::organic;
  throw std::runtime_error("type: '" + std::string(text) +
                           "' is neither 'conventional' nor 'organic'");
}

double numeric_field(const RawRecord& row, std::size_t column) {
  switch (column) {
    case 0: return row.average_price;
    case 1: return row.plu4046;
    case 2: return row.plu4225;
    case 3: return row.plu4770;
    case 4: return row.sales_volume;
    case 5: return row.weather;
    default: throw std::logic_error("data: numeric column index out of range");
  }
}

LoadResult load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_csv_text(buffer.str());
}

LoadResult load_csv_text(std::string_view text) {
  // Header names from the retail schema, matched case-insensitively.
  static const std::array<std::pair<const char*, const char*>, 10> kColumns = {{
      {"date", "Date"},
      {"averageprice", "AveragePrice"},
      {"type", "type"},
      {"year", "year"},
      {"region", "Region"},
      {"4046", "4046"},
      {"4225", "4225"},
      {"4770", "4770"},
      {"salesvolume", "Salesvolume"},
      {"weather", "weather"},
  }};

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw std::invalid_argument("schema: file has no header row");

  std::vector<std::string> header = split_csv_line(lines[0]);
  std::array<std::size_t, kColumns.size()> index{};
  std::vector<bool> claimed(header.size(), false);
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    bool found = false;
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (to_lower(trim(header[h])) == kColumns[c].first) {
        if (claimed[h] || found) {
          throw std::invalid_argument(std::string("schema: duplicate column '") +
                                      kColumns[c].second + "'");
        }
        index[c] = h;
        claimed[h] = true;
        found = true;
      }
    }
    if (!found) {
      throw std::invalid_argument(std::string("schema: missing column '") + kColumns[c].second +
                                  "'");
    }
  }
  for (std::size_t h = 0; h < header.size(); ++h) {
    if (!claimed[h]) {
      throw std::invalid_argument("schema: unexpected column '" +
                                  std::string(trim(header[h])) + "'");
    }
  }

  LoadResult result;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::int64_t line_no = static_cast<std::int64_t>(li) + 1;
    if (trim(lines[li]).empty()) continue;
    std::vector<std::string> cells = split_csv_line(lines[li]);
    if (cells.size() != header.size()) {
      throw std::runtime_error("row: line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    }
    RawRecord row;
    try {
      row.date = Date::parse(cells[index[0]]);
      row.type = parse_avocado_type(cells[index[2]]);
    } catch (const std::exception& e) {
      throw std::runtime_error("row: line " + std::to_string(line_no) + ": " + e.what());
    }
    row.average_price = parse_double_cell(cells[index[1]], line_no, "AveragePrice");
    row.year = parse_int_cell(cells[index[3]], line_no, "year");
    row.region = std::string(trim(cells[index[4]]));
    row.plu4046 = parse_double_cell(cells[index[5]], line_no, "4046");
    row.plu4225 = parse_double_cell(cells[index[6]], line_no, "4225");
    row.plu4770 = parse_double_cell(cells[index[7]], line_no, "4770");
    row.sales_volume = parse_double_cell(cells[index[8]], line_no, "Salesvolume");
    row.weather = parse_double_cell(cells[index[9]], line_no, "weather");
    if (row.region.empty()) {
      throw std::runtime_error("row: line " + std::to_string(line_no) + ": empty Region");
    }
    if (row.year != row.date.year) {
      throw std::runtime_error("row: line " + std::to_string(line_no) + ": year " +
                               std::to_string(row.year) + " does not match date " +
                               row.date.to_string());
    }
    for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
      if (numeric_field(row, c) == kMissingSentinel) ++result.report.missing_counts[c];
    }
    result.table.rows.push_back(std::move(row));
  }
  result.report.rows = static_cast<std::int64_t>(result.table.rows.size());
  return result;
}

void write_table_csv(const RecordTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  out << "Date,AveragePrice,type,year,Region,4046,4225,4770,Salesvolume,weather\n";
  for (const RawRecord& r : table.rows) {
    out << r.date.to_string() << ',' << format_double(r.average_price) << ',' << to_string(r.type)
        << ',' << r.year << ',' << r.region << ',' << format_double(r.plu4046) << ','
        << format_double(r.plu4225) << ',' << format_double(r.plu4770) << ','
        << format_double(r.sales_volume) << ',' << format_double(r.weather) << '\n';
  }
}

CleanResult clean(const RecordTable& table) {
  CleanResult result;
  result.report.rows_in = static_cast<std::int64_t>(table.rows.size());
  for (const RawRecord& row : table.rows) {
    bool has_sentinel = false;
    for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
      if (numeric_field(row, c) == kMissingSentinel) {
        has_sentinel = true;
        break;
      }
    }
    if (has_sentinel) {
      ++result.report.dropped_sentinel;
      continue;
    }
    if (!(row.average_price > 0.0)) {
      ++result.report.dropped_nonpositive_price;
      continue;
    }
    result.table.rows.push_back(row);
  }
  result.report.rows_out = static_cast<std::int64_t>(result.table.rows.size());
  if (result.report.rows_in > 0 && result.report.rows_out == 0) {
    throw std::runtime_error("data: cleaning dropped every row");
  }
  return result;
}

FeatureSpec FeatureSpec::fit(std::span<const RawRecord> train_rows) {
  if (train_rows.empty()) {
    throw std::invalid_argument("data: cannot fit a feature spec on zero training rows");
  }
  FeatureSpec spec;
  const double n = static_cast<double>(train_rows.size());
  for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
    double mean = 0.0;
    for (const RawRecord& r : train_rows) mean += numeric_field(r, c);
    mean /= n;
    double var = 0.0;
    for (const RawRecord& r : train_rows) {
      double d = numeric_field(r, c) - mean;
      var += d * d;
    }
    double stddev = std::sqrt(var / n);  // population stddev
    if (stddev <= 1e-12 * std::max(1.0, std::fabs(mean))) {
      throw std::invalid_argument(std::string("data: column '") + kNumericColumns[c] +
                                  "' is constant in the training rows; cannot standardize");
    }
    spec.numeric_[c] = {mean, stddev};
  }
  std::set<std::string> types, regions;
  for (const RawRecord& r : train_rows) {
    types.insert(std::string(to_string(r.type)));
    regions.insert(r.region);
  }
  spec.type_vocab_.assign(types.begin(), types.end());
  spec.region_vocab_.assign(regions.begin(), regions.end());
  return spec;
}

FeatureSpec FeatureSpec::from_parts(std::array<ColumnScaling, kNumericColumns.size()> numeric,
                                    std::vector<std::string> type_vocab,
                                    std::vector<std::string> region_vocab) {
  FeatureSpec spec;
  spec.numeric_ = numeric;
  spec.type_vocab_ = std::move(type_vocab);
  spec.region_vocab_ = std::move(region_vocab);
  return spec;
}

std::int64_t FeatureSpec::feature_dim() const {
  return static_cast<std::int64_t>(kNumericColumns.size() + type_vocab_.size() +
                                   region_vocab_.size());
}

std::vector<std::string> FeatureSpec::feature_names() const {
  std::vector<std::string> names(kNumericColumns.begin(), kNumericColumns.end());
  for (const std::string& t : type_vocab_) names.push_back("type=" + t);
  for (const std::string& r : region_vocab_) names.push_back("region=" + r);
  return names;
}

double FeatureSpec::encode_target(double usd) const {
  return (usd - numeric_[0].mean) / numeric_[0].stddev;
}

double FeatureSpec::decode_target(double z) const {
  return z * numeric_[0].stddev + numeric_[0].mean;
}

Matrix FeatureSpec::encode(std::span<const RawRecord> series,
                           std::vector<std::string>* warnings) const {
  Matrix m;
  m.rows = feature_dim();
  m.cols = static_cast<std::int64_t>(series.size());
  m.values.assign(static_cast<std::size_t>(m.rows * m.cols), 0.0);
  std::set<std::string> unseen;
  const std::int64_t type_base = static_cast<std::int64_t>(kNumericColumns.size());
  const std::int64_t region_base = type_base + static_cast<std::int64_t>(type_vocab_.size());
  for (std::int64_t t = 0; t < m.cols; ++t) {
    const RawRecord& row = series[static_cast<std::size_t>(t)];
    for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
      m.at(static_cast<std::int64_t>(c), t) =
          (numeric_field(row, c) - numeric_[c].mean) / numeric_[c].stddev;
    }
    std::string type_name(to_string(row.type));
    auto ti = std::find(type_vocab_.begin(), type_vocab_.end(), type_name);
    if (ti != type_vocab_.end()) {
      m.at(type_base + (ti - type_vocab_.begin()), t) = 1.0;
    } else {
      unseen.insert("type '" + type_name + "'");
    }
    auto ri = std::find(region_vocab_.begin(), region_vocab_.end(), row.region);
    if (ri != region_vocab_.end()) {
      m.at(region_base + (ri - region_vocab_.begin()), t) = 1.0;
    } else {
      unseen.insert("region '" + row.region + "'");
    }
  }
  if (warnings) {
    for (const std::string& u : unseen) {
      warnings->push_back("encode: " + u + " not in the training vocabulary; one-hot left zero");
    }
  }
  return m;
}

std::map<SeriesKey, std::vector<RawRecord>> group_series(const RecordTable& table,
                                                          std::vector<std::string>* warnings) {
  std::map<SeriesKey, std::vector<RawRecord>> series;
  for (const RawRecord& row : table.rows) {
    series[SeriesKey{row.region, row.type}].push_back(row);
  }
  for (auto& [key, rows] : series) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.date < b.date; });
    std::vector<RawRecord> unique_rows;
    for (RawRecord& row : rows) {
      if (!unique_rows.empty() && unique_rows.back().date == row.date) {
        if (warnings) {
          warnings->push_back("series " + series_name(key) + ": duplicate date " +
                              row.date.to_string() + " dropped (kept first)");
        }
        continue;
      }
      unique_rows.push_back(std::move(row));
    }
    rows = std::move(unique_rows);
  }
  return series;
}

std::vector<WindowedSample> make_windows(std::span<const RawRecord> series,
                                         const FeatureSpec& spec, std::int64_t window_len,
                                         std::vector<std::string>* warnings) {
  if (window_len < 1) throw std::invalid_argument("data: window length must be >= 1");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i - 1].date < series[i].date)) {
      throw std::invalid_argument("data: series rows must be strictly time-ordered");
    }
  }
  const std::int64_t t_len = static_cast<std::int64_t>(series.size());
  std::vector<WindowedSample> samples;
  if (t_len < window_len + 1) {
    if (warnings && t_len > 0) {
      warnings->push_back("series " +
                          series_name(SeriesKey{series[0].region, series[0].type}) + ": length " +
                          std::to_string(t_len) + " < window+1 = " +
                          std::to_string(window_len + 1) + ", skipped");
    }
    return samples;
  }
  Matrix encoded = spec.encode(series, warnings);
  const std::int64_t f_dim = encoded.rows;
  for (std::int64_t target = window_len; target < t_len; ++target) {
    std::vector<double> window(static_cast<std::size_t>(f_dim * window_len), 0.0);
    for (std::int64_t r = 0; r < f_dim; ++r) {
      for (std::int64_t c = 0; c < window_len; ++c) {
        window[static_cast<std::size_t>(r * window_len + c)] =
            encoded.at(r, target - window_len + c);
      }
    }
    const RawRecord& target_row = series[static_cast<std::size_t>(target)];
    WindowedSample sample;
    sample.window = Tensor::matrix(f_dim, window_len, std::move(window));
    sample.target_std = spec.encode_target(target_row.average_price);
    sample.target_raw = target_row.average_price;
    sample.target_date = target_row.date;
    sample.region = target_row.region;
    sample.type = target_row.type;
    samples.push_back(std::move(sample));
  }
  return samples;
}

void SplitRatios::validate() const {
  if (train < 0.0 || val < 0.0 || test < 0.0 || std::fabs(train + val + test - 1.0) > 1e-9) {
    throw std::invalid_argument("config: split ratios must be nonnegative and sum to 1");
  }
}

namespace {

std::pair<std::size_t, std::size_t> split_counts(std::size_t n, const SplitRatios& ratios) {
  auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios.train));
  auto n_trainval =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * (ratios.train + ratios.val)));
  n_trainval = std::max(n_trainval, n_train);
  return {n_train, n_trainval};
}

void sort_by_target(std::vector<WindowedSample>& samples) {
  std::stable_sort(samples.begin(), samples.end(),
                   [](const WindowedSample& a, const WindowedSample& b) {
                     return std::tie(a.target_date, a.region, a.type) <
                            std::tie(b.target_date, b.region, b.type);
                   });
}

}  // namespace

DataSplit split_chronological(std::vector<WindowedSample> samples, const SplitRatios& ratios) {
  ratios.validate();
  sort_by_target(samples);
  auto [n_train, n_trainval] = split_counts(samples.size(), ratios);
  DataSplit split;
  split.train.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(samples.begin() + static_cast<std::ptrdiff_t>(n_train),
                   samples.begin() + static_cast<std::ptrdiff_t>(n_trainval));
  split.test.assign(samples.begin() + static_cast<std::ptrdiff_t>(n_trainval), samples.end());
  return split;
}

Dataset prepare_dataset(const RecordTable& cleaned, std::int64_t window_len,
                        const SplitRatios& ratios) {
  ratios.validate();
  Dataset dataset;
  auto series = group_series(cleaned, &dataset.warnings);

  // The chronological cut is decided on target positions alone, before any
  // encoding, so the feature spec can be fit on the training period only.
  struct Candidate {
    Date date;
    SeriesKey key;
  };
  std::vector<Candidate> candidates;
  for (const auto& [key, rows] : series) {
    for (std::int64_t t = window_len; t < static_cast<std::int64_t>(rows.size()); ++t) {
      candidates.push_back({rows[static_cast<std::size_t>(t)].date, key});
    }
  }
  if (candidates.empty()) {
    throw std::runtime_error("data: no usable windows; every series is shorter than window+1 = " +
                             std::to_string(window_len + 1));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return std::tie(a.date, a.key.region, a.key.type) <
                            std::tie(b.date, b.key.region, b.key.type);
                   });
  auto [n_train, n_trainval] = split_counts(candidates.size(), ratios);
  if (n_train == 0) {
    throw std::runtime_error("data: training split is empty; add data or raise the train ratio");
  }
  dataset.train_cutoff = candidates[n_train - 1].date;

  std::vector<RawRecord> train_rows;
  for (const RawRecord& row : cleaned.rows) {
    if (row.date <= dataset.train_cutoff) train_rows.push_back(row);
  }
  dataset.spec = FeatureSpec::fit(train_rows);

  std::vector<WindowedSample> samples;
  for (const auto& [key, rows] : series) {
    auto s = make_windows(rows, dataset.spec, window_len, &dataset.warnings);
    samples.insert(samples.end(), std::make_move_iterator(s.begin()),
                   std::make_move_iterator(s.end()));
  }
  dataset.split = split_chronological(std::move(samples), ratios);
  return dataset;
}

bool CorrelationMatrix::defined(std::int64_t i, std::int64_t j) const {
  return !std::isnan(values.at(i, j));
}

CorrelationMatrix correlation_matrix(const RecordTable& table,
                                     std::span<const std::string> columns) {
  if (table.rows.size() < 2) {
    throw std::invalid_argument("data: correlation needs at least 2 rows");
  }
  const std::size_t n = table.rows.size();
  std::vector<std::vector<double>> series;
  for (const std::string& name : columns) {
    std::vector<double> values(n, 0.0);
    std::string lowered = to_lower(name);
    if (lowered == "date") {
      for (std::size_t r = 0; r < n; ++r)
        values[r] = static_cast<double>(table.rows[r].date.ordinal());
    } else if (lowered == "year") {
      for (std::size_t r = 0; r < n; ++r) values[r] = static_cast<double>(table.rows[r].year);
    } else {
      bool found = false;
      for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
        if (to_lower(kNumericColumns[c]) == lowered) {
          for (std::size_t r = 0; r < n; ++r) values[r] = numeric_field(table.rows[r], c);
          found = true;
          break;
        }
      }
      if (!found) throw std::invalid_argument("data: unknown correlation column '" + name + "'");
    }
    series.push_back(std::move(values));
  }

  const std::int64_t k = static_cast<std::int64_t>(columns.size());
  std::vector<double> means(columns.size(), 0.0), sds(columns.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (double v : series[c]) means[c] += v;
    means[c] /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series[c]) var += (v - means[c]) * (v - means[c]);
    sds[c] = std::sqrt(var / static_cast<double>(n));
  }

  CorrelationMatrix result;
  result.labels.assign(columns.begin(), columns.end());
  result.values = Matrix{k, k, std::vector<double>(static_cast<std::size_t>(k * k), 0.0)};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t j = 0; j < k; ++j) {
      std::size_t ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      bool degenerate_i = sds[ui] <= 1e-12 * std::max(1.0, std::fabs(means[ui]));
      bool degenerate_j = sds[uj] <= 1e-12 * std::max(1.0, std::fabs(means[uj]));
      if (degenerate_i || degenerate_j) {
        result.values.at(i, j) = nan;
        continue;
      }
      if (i == j) {
        result.values.at(i, j) = 1.0;
        continue;
      }
      double cov = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        cov += (series[ui][r] - means[ui]) * (series[uj][r] - means[uj]);
      }
      cov /= static_cast<double>(n);
      result.values.at(i, j) = std::clamp(cov / (sds[ui] * sds[uj]), -1.0, 1.0);
    }
  }
  return result;
}

void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  for (const std::string& label : matrix.labels) out << ',' << label;
  out << '\n';
  for (std::int64_t i = 0; i < matrix.values.rows; ++i) {
    out << matrix.labels[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < matrix.values.cols; ++j) {
      out << ',';
      if (matrix.defined(i, j)) {
        out << format_double(matrix.values.at(i, j));
      } else {
        out << "NA";
      }
    }
    out << '\n';
  }
}

RecordTable gen_synthetic(std::int64_t num_regions, std::int64_t weeks, std::uint64_t seed) {
  if (num_regions < 1) throw std::invalid_argument("gen: num_regions must be >= 1");
  if (weeks < 2) throw std::invalid_argument("gen: weeks must be >= 2");

  Rng rng(seed);
  const std::int64_t start = Date::parse("2015-01-04").ordinal();
  RecordTable table;
  for (std::int64_t r = 0; r < num_regions; ++r) {
    char name[16];
    std::snprintf(name, sizeof name, "Region%02d", static_cast<int>(r + 1));
    const double region_offset = rng.uniform(-0.08, 0.08);
    const double price_phase = rng.uniform(0.0, 52.0);
    const double weather_phase = rng.uniform(0.0, 52.0);
    for (AvocadoType type : {AvocadoType::conventional, AvocadoType::organic}) {
      const bool organic = type == AvocadoType::organic;
      const double base = (organic ? 1.75 : 1.10) + region_offset;
      const double amplitude = organic ? 0.16 : 0.12;
      const double volume_base = (organic ? 6.0e4 : 8.0e5) * rng.uniform(0.7, 1.3);
      for (std::int64_t w = 0; w < weeks; ++w) {
        const double season =
            std::sin(2.0 * std::numbers::pi * (static_cast<double>(w) + price_phase) / 52.0);
        const double drift = kSyntheticTrendPerWeek * static_cast<double>(w);
        double price = base + drift + amplitude * season + rng.normal(0.0, 0.04);
        price = std::max(price, 0.35);
        // Demand moves against the detrended price level.
        double demand =
            volume_base * std::exp(-1.2 * (price - base - drift)) * (1.0 + rng.normal(0.0, 0.05));
        demand = std::max(demand, 1.0);
        RawRecord row;
        row.date = Date::from_ordinal(start + 7 * w);
        row.year = row.date.year;
        row.region = name;
        row.type = type;
        row.average_price = price;
        row.plu4046 = std::max(0.0, demand * 0.42 * (1.0 + rng.normal(0.0, 0.03)));
        row.plu4225 = std::max(0.0, demand * 0.36 * (1.0 + rng.normal(0.0, 0.03)));
        row.plu4770 = std::max(0.0, demand * 0.05 * (1.0 + rng.normal(0.0, 0.03)));
        row.sales_volume = demand;
        row.weather = std::clamp(
            0.5 +
                0.3 * std::sin(2.0 * std::numbers::pi *
                               (static_cast<double>(w) + weather_phase) / 52.0) +
                rng.normal(0.0, 0.08),
            0.0, 1.0);
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace avocast
