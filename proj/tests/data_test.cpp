#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>

#include "avocast/data.hpp"
#include "avocast/rng.hpp"

using namespace avocast;

namespace {

constexpr const char* kHeader =
    "Date,AveragePrice,type,year,Region,4046,4225,4770,Salesvolume,weather\n";

std::string fixture_row(const std::string& date, double price, const std::string& type,
                        int year, const std::string& region, double p46, double p25, double p70,
                        double vol, double weather) {
  std::ostringstream out;
  out << std::setprecision(17) << date << ',' << price << ',' << type << ',' << year << ','
      << region << ',' << p46 << ',' << p25 << ',' << p70 << ',' << vol << ',' << weather << '\n';
  return out.str();
}

std::vector<RawRecord> zscore_fixture_rows() {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", 10, 5, 1, 100, 0.2) +
                    fixture_row("2015-01-11", 2.0, "organic", 2015, "B", 20, 6, 2, 200, 0.5) +
                    fixture_row("2015-01-18", 3.0, "conventional", 2015, "A", 30, 7, 4, 400, 0.9);
  return load_csv_text(csv).table.rows;
}

}  // namespace

TEST(DateTest, ParsesAndRoundTrips) {
  Date d = Date::parse("2016-02-29");
  EXPECT_EQ(d.year, 2016);
  EXPECT_EQ(d.month, 2);
  EXPECT_EQ(d.day, 29);
  EXPECT_EQ(d.to_string(), "2016-02-29");
  EXPECT_EQ(Date::from_ordinal(d.ordinal()), d);
  EXPECT_EQ(Date::parse("2015-01-11").ordinal() - Date::parse("2015-01-04").ordinal(), 7);
}

TEST(DateTest, RejectsMalformed) {
  EXPECT_THROW(Date::parse("2015-13-01"), std::runtime_error);
  EXPECT_THROW(Date::parse("2015-02-30"), std::runtime_error);
  EXPECT_THROW(Date::parse("20150101"), std::runtime_error);
  EXPECT_THROW(Date::parse("2015/01/01"), std::runtime_error);
}

TEST(LoadTest, ParsesFixtureRow) {
  std::string csv = std::string(kHeader) +
                    "2015-01-04,1.33,conventional,2015,Albany,64236.62,54454.85,48.16,435021.49,0.71\n";
  LoadResult r = load_csv_text(csv);
  ASSERT_EQ(r.table.rows.size(), 1u);
  const RawRecord& row = r.table.rows[0];
  EXPECT_EQ(row.date.to_string(), "2015-01-04");
  EXPECT_EQ(row.average_price, 1.33);
  EXPECT_EQ(row.type, AvocadoType::conventional);
  EXPECT_EQ(row.year, 2015);
  EXPECT_EQ(row.region, "Albany");
  EXPECT_EQ(row.plu4046, 64236.62);
  EXPECT_EQ(row.sales_volume, 435021.49);
  EXPECT_EQ(row.weather, 0.71);
}

TEST(LoadTest, EmptyDataSection) {
  LoadResult r = load_csv_text(kHeader);
  EXPECT_EQ(r.table.rows.size(), 0u);
  EXPECT_EQ(r.report.rows, 0);
}

TEST(LoadTest, MissingColumnIsSchemaError) {
  std::string csv = "Date,type,year,Region,4046,4225,4770,Salesvolume,weather\n";
  try {
    load_csv_text(csv);
    FAIL() << "expected a schema error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("AveragePrice"), std::string::npos);
  }
}

TEST(LoadTest, UnexpectedColumnIsSchemaError) {
  std::string csv =
      "Date,AveragePrice,type,year,Region,4046,4225,4770,Salesvolume,weather,Totalbags\n";
  try {
    load_csv_text(csv);
    FAIL() << "expected a schema error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Totalbags"), std::string::npos);
  }
}

TEST(LoadTest, HeaderIsCaseAndOrderInsensitive) {
  std::string csv =
      "region,DATE,averageprice,TYPE,Year,4046,4225,4770,SalesVolume,Weather\n"
      "Albany,2015-01-04,1.33,conventional,2015,1,2,3,4,0.5\n";
  LoadResult r = load_csv_text(csv);
  ASSERT_EQ(r.table.rows.size(), 1u);
  EXPECT_EQ(r.table.rows[0].region, "Albany");
  EXPECT_EQ(r.table.rows[0].plu4046, 1.0);
}

TEST(LoadTest, UnparseableCellReportsLineNumber) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", 1, 2, 3, 4, 0.5) +
                    "2015-01-11,not_a_price,conventional,2015,A,1,2,3,4,0.5\n";
  try {
    load_csv_text(csv);
    FAIL() << "expected a row error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("AveragePrice"), std::string::npos);
  }
}

TEST(LoadTest, YearMustMatchDate) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2014, "A", 1, 2, 3, 4, 0.5);
  EXPECT_THROW(load_csv_text(csv), std::runtime_error);
}

TEST(LoadTest, SentinelCountsReported) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", -99, 2, 3, 4, 0.5) +
                    fixture_row("2015-01-11", 1.1, "conventional", 2015, "A", 1, 2, 3, -99, 0.5) +
                    fixture_row("2015-01-18", 1.2, "conventional", 2015, "A", 1, 2, 3, 4, -99);
  LoadResult r = load_csv_text(csv);
  EXPECT_EQ(r.report.missing_counts[1], 1);  // 4046
  EXPECT_EQ(r.report.missing_counts[4], 1);  // Salesvolume
  EXPECT_EQ(r.report.missing_counts[5], 1);  // weather
  EXPECT_EQ(r.report.missing_counts[0], 0);
}

TEST(CleanTest, DropsSentinelRows) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", 1, 2, 3, -99, 0.5) +
                    fixture_row("2015-01-11", 1.1, "conventional", 2015, "A", 1, 2, 3, 4, 0.5);
  CleanResult r = clean(load_csv_text(csv).table);
  EXPECT_EQ(r.report.dropped_sentinel, 1);
  ASSERT_EQ(r.table.rows.size(), 1u);
  EXPECT_EQ(r.table.rows[0].date.to_string(), "2015-01-11");
}

TEST(CleanTest, NoSentinelsIsNoop) {
  RecordTable table = gen_synthetic(1, 10, 4);
  CleanResult r = clean(table);
  EXPECT_EQ(r.report.dropped_sentinel, 0);
  EXPECT_EQ(r.report.dropped_nonpositive_price, 0);
  EXPECT_EQ(r.table.rows, table.rows);
}

TEST(CleanTest, CountedFixtureTenToSeven) {
  std::string csv(kHeader);
  for (int i = 0; i < 10; ++i) {
    Date d = Date::from_ordinal(Date::parse("2015-01-04").ordinal() + 7 * i);
    double p46 = i == 2 ? -99.0 : 10.0 + i;
    double weather = i == 5 ? -99.0 : 0.4;
    double vol = i == 8 ? -99.0 : 100.0 + i;
    csv += fixture_row(d.to_string(), 1.0 + 0.01 * i, "conventional", d.year, "A", p46, 2, 3, vol,
                       weather);
  }
  CleanResult r = clean(load_csv_text(csv).table);
  EXPECT_EQ(r.report.rows_in, 10);
  EXPECT_EQ(r.report.dropped_sentinel, 3);
  EXPECT_EQ(r.report.rows_out, 7);
}

TEST(CleanTest, DropsNonPositivePrices) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 0.0, "conventional", 2015, "A", 1, 2, 3, 4, 0.5) +
                    fixture_row("2015-01-11", -1.2, "conventional", 2015, "A", 1, 2, 3, 4, 0.5) +
                    fixture_row("2015-01-18", 1.5, "conventional", 2015, "A", 1, 2, 3, 4, 0.5);
  CleanResult r = clean(load_csv_text(csv).table);
  EXPECT_EQ(r.report.dropped_nonpositive_price, 2);
  EXPECT_EQ(r.table.rows.size(), 1u);
}

TEST(CleanTest, Idempotent) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", -99, 2, 3, 4, 0.5) +
                    fixture_row("2015-01-11", 1.1, "conventional", 2015, "A", 1, 2, 3, 4, 0.5);
  CleanResult once = clean(load_csv_text(csv).table);
  CleanResult twice = clean(once.table);
  EXPECT_EQ(once.table.rows, twice.table.rows);
  EXPECT_EQ(twice.report.dropped_sentinel, 0);
}

TEST(CleanTest, ErrorsWhenNothingSurvives) {
  std::string csv = std::string(kHeader) +
                    fixture_row("2015-01-04", 1.0, "conventional", 2015, "A", -99, 2, 3, 4, 0.5);
  EXPECT_THROW(clean(load_csv_text(csv).table), std::runtime_error);
}

TEST(FeatureSpecTest, HandZScore) {
  auto rows = zscore_fixture_rows();
  FeatureSpec spec = FeatureSpec::fit(rows);
  Matrix m = spec.encode(rows, nullptr);
  const double expected = std::sqrt(1.5);  // population stddev of {1,2,3} is sqrt(2/3)
  EXPECT_NEAR(m.at(0, 0), -expected, 1e-12);
  EXPECT_NEAR(m.at(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(m.at(0, 2), expected, 1e-12);
  EXPECT_NEAR(m.at(0, 0), -1.2247, 5e-5);
}

TEST(FeatureSpecTest, ConstantColumnRejected) {
  auto rows = zscore_fixture_rows();
  for (RawRecord& r : rows) r.weather = 0.5;
  try {
    FeatureSpec::fit(rows);
    FAIL() << "expected a spec error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("weather"), std::string::npos);
  }
}

TEST(FeatureSpecTest, SingleCategoryTypeHasWidthOne) {
  auto rows = zscore_fixture_rows();
  for (RawRecord& r : rows) r.type = AvocadoType::conventional;
  FeatureSpec spec = FeatureSpec::fit(rows);
  EXPECT_EQ(spec.type_vocabulary().size(), 1u);
  Matrix m = spec.encode(rows, nullptr);
  const std::int64_t type_row = static_cast<std::int64_t>(kNumericColumns.size());
  for (std::int64_t t = 0; t < m.cols; ++t) EXPECT_EQ(m.at(type_row, t), 1.0);
}

TEST(FeatureSpecTest, RegionOneHotByVocabularyOrder) {
  auto rows = zscore_fixture_rows();  // regions A, B, A
  FeatureSpec spec = FeatureSpec::fit(rows);
  ASSERT_EQ(spec.region_vocabulary(), (std::vector<std::string>{"A", "B"}));
  Matrix m = spec.encode(rows, nullptr);
  const std::int64_t base =
      static_cast<std::int64_t>(kNumericColumns.size() + spec.type_vocabulary().size());
  EXPECT_EQ(m.at(base + 0, 1), 0.0);  // row with region B
  EXPECT_EQ(m.at(base + 1, 1), 1.0);
}

TEST(FeatureSpecTest, UnseenCategoryEncodesZerosAndWarns) {
  auto rows = zscore_fixture_rows();
  FeatureSpec spec = FeatureSpec::fit(rows);
  auto unseen = rows;
  for (RawRecord& r : unseen) r.region = "Z";
  std::vector<std::string> warnings;
  Matrix m = spec.encode(unseen, &warnings);
  const std::int64_t base =
      static_cast<std::int64_t>(kNumericColumns.size() + spec.type_vocabulary().size());
  for (std::int64_t t = 0; t < m.cols; ++t) {
    EXPECT_EQ(m.at(base + 0, t), 0.0);
    EXPECT_EQ(m.at(base + 1, t), 0.0);
  }
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("'Z'"), std::string::npos);
}

TEST(FeatureSpecTest, TrainingColumnsStandardized) {
  RecordTable table = gen_synthetic(3, 60, 12);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  Matrix m = spec.encode(table.rows, nullptr);
  for (std::size_t c = 0; c < kNumericColumns.size(); ++c) {
    double mean = 0.0;
    for (std::int64_t t = 0; t < m.cols; ++t) mean += m.at(static_cast<std::int64_t>(c), t);
    mean /= static_cast<double>(m.cols);
    double var = 0.0;
    for (std::int64_t t = 0; t < m.cols; ++t) {
      double d = m.at(static_cast<std::int64_t>(c), t) - mean;
      var += d * d;
    }
    var /= static_cast<double>(m.cols);
    EXPECT_LT(std::fabs(mean), 1e-9) << kNumericColumns[c];
    EXPECT_LT(std::fabs(std::sqrt(var) - 1.0), 1e-9) << kNumericColumns[c];
  }
}

TEST(FeatureSpecTest, InverseStandardizationExact) {
  RecordTable table = gen_synthetic(2, 40, 13);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  for (const RawRecord& r : table.rows) {
    double x = r.average_price;
    EXPECT_LE(std::fabs(spec.decode_target(spec.encode_target(x)) - x),
              1e-12 * std::max(1.0, std::fabs(x)));
  }
  // Same property for a large-magnitude column through the matrix path.
  Matrix m = spec.encode(table.rows, nullptr);
  const ColumnScaling& vol = spec.numeric_scalings()[4];
  for (std::int64_t t = 0; t < m.cols; ++t) {
    double x = table.rows[static_cast<std::size_t>(t)].sales_volume;
    double decoded = m.at(4, t) * vol.stddev + vol.mean;
    EXPECT_LE(std::fabs(decoded - x), 1e-12 * std::max(1.0, std::fabs(x)));
  }
}

TEST(WindowTest, BoundaryCounts) {
  RecordTable table = gen_synthetic(1, 13, 14);  // one region, two series of 13 weeks
  auto series = group_series(table, nullptr);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  const auto& rows = series.begin()->second;

  std::vector<std::string> warnings;
  EXPECT_EQ(make_windows(rows, spec, 12, &warnings).size(), 1u);  // length L+1
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(make_windows(rows, spec, 13, &warnings).size(), 0u);  // length L
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(WindowTest, CountFormula) {
  RecordTable table = gen_synthetic(1, 100, 15);
  auto series = group_series(table, nullptr);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  for (const auto& [key, rows] : series) {
    EXPECT_EQ(make_windows(rows, spec, 12, nullptr).size(), 88u);
  }
}

TEST(WindowTest, TargetIsStepAfterWindow) {
  RecordTable table = gen_synthetic(1, 20, 16);
  auto series = group_series(table, nullptr);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  const auto& rows = series.begin()->second;
  auto samples = make_windows(rows, spec, 5, nullptr);
  ASSERT_EQ(samples.size(), 15u);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RawRecord& target_row = rows[i + 5];
    EXPECT_EQ(samples[i].target_raw, target_row.average_price);
    EXPECT_EQ(samples[i].target_date, target_row.date);
    EXPECT_NEAR(samples[i].target_std, spec.encode_target(target_row.average_price), 0.0);
    // Last window column is the step right before the target.
    EXPECT_EQ(samples[i].window->data()[4], spec.encode(rows, nullptr).at(0, i + 4));
  }
}

TEST(WindowTest, RegenerationIsBitIdentical) {
  RecordTable table = gen_synthetic(2, 30, 17);
  auto series = group_series(table, nullptr);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  const auto& rows = series.begin()->second;
  auto a = make_windows(rows, spec, 8, nullptr);
  auto b = make_windows(rows, spec, 8, nullptr);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].window->data().size(); ++j) {
      EXPECT_EQ(a[i].window->data()[j], b[i].window->data()[j]);
    }
    EXPECT_EQ(a[i].target_std, b[i].target_std);
  }
}

TEST(WindowTest, UnsortedSeriesRejected) {
  RecordTable table = gen_synthetic(1, 10, 18);
  FeatureSpec spec = FeatureSpec::fit(table.rows);
  auto series = group_series(table, nullptr);
  auto rows = series.begin()->second;
  std::swap(rows[0], rows[1]);
  EXPECT_THROW(make_windows(rows, spec, 4, nullptr), std::invalid_argument);
}

TEST(SplitTest, TestIsStrictlyLaterThanTrain) {
  RecordTable table = gen_synthetic(2, 80, 19);
  Dataset ds = prepare_dataset(table, 8, SplitRatios{});
  ASSERT_FALSE(ds.split.train.empty());
  ASSERT_FALSE(ds.split.val.empty());
  ASSERT_FALSE(ds.split.test.empty());
  Date train_max = ds.split.train.front().target_date;
  for (const auto& s : ds.split.train) train_max = std::max(train_max, s.target_date);
  for (const auto& s : ds.split.val) EXPECT_LE(train_max, s.target_date);
  Date val_max = ds.split.val.front().target_date;
  for (const auto& s : ds.split.val) val_max = std::max(val_max, s.target_date);
  for (const auto& s : ds.split.test) EXPECT_LE(val_max, s.target_date);
  EXPECT_EQ(ds.train_cutoff, train_max);
}

TEST(SplitTest, RatioCounts) {
  RecordTable table = gen_synthetic(1, 56, 20);
  Dataset ds = prepare_dataset(table, 6, SplitRatios{});
  // 2 series x 50 samples = 100
  EXPECT_EQ(ds.split.train.size(), 70u);
  EXPECT_EQ(ds.split.val.size(), 15u);
  EXPECT_EQ(ds.split.test.size(), 15u);
}

TEST(SplitTest, BadRatiosRejected) {
  EXPECT_THROW(split_chronological({}, SplitRatios{0.5, 0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(split_chronological({}, SplitRatios{-0.1, 0.6, 0.5}), std::invalid_argument);
}

TEST(PipelineTest, NoLeakageRefitIdentity) {
  RecordTable table = gen_synthetic(2, 60, 21);
  Dataset ds = prepare_dataset(table, 8, SplitRatios{});

  std::vector<RawRecord> train_rows;
  for (const RawRecord& r : table.rows) {
    if (r.date <= ds.train_cutoff) train_rows.push_back(r);
  }
  EXPECT_TRUE(FeatureSpec::fit(train_rows) == ds.spec);

  // Deleting everything after the training period leaves the spec unchanged.
  RecordTable truncated;
  for (const RawRecord& r : table.rows) {
    if (r.date <= ds.train_cutoff) truncated.rows.push_back(r);
  }
  EXPECT_TRUE(FeatureSpec::fit(truncated.rows) == ds.spec);
}

TEST(PipelineTest, ErrorsWhenEverySeriesTooShort) {
  RecordTable table = gen_synthetic(2, 5, 22);
  EXPECT_THROW(prepare_dataset(table, 12, SplitRatios{}), std::runtime_error);
}

TEST(GroupSeriesTest, SortsAndDropsDuplicateDates) {
  RecordTable table = gen_synthetic(1, 6, 23);
  std::swap(table.rows[0], table.rows[3]);
  table.rows.push_back(table.rows[2]);  // duplicate date in one series
  std::vector<std::string> warnings;
  auto series = group_series(table, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  for (const auto& [key, rows] : series) {
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].date, rows[i].date);
  }
}

TEST(CorrelationTest, SelfCorrelationIsOne) {
  RecordTable table = gen_synthetic(1, 30, 24);
  std::vector<std::string> cols = {"AveragePrice", "Salesvolume"};
  CorrelationMatrix m = correlation_matrix(table, cols);
  EXPECT_EQ(m.values.at(0, 0), 1.0);
  EXPECT_EQ(m.values.at(1, 1), 1.0);
  EXPECT_EQ(m.values.at(0, 1), m.values.at(1, 0));
}

TEST(CorrelationTest, ExactAnticorrelation) {
  std::string csv(kHeader);
  for (int i = 0; i < 8; ++i) {
    Date d = Date::from_ordinal(Date::parse("2015-01-04").ordinal() + 7 * i);
    double price = 1.0 + 0.1 * i;
    csv += fixture_row(d.to_string(), price, "conventional", d.year, "A", 100.0 - 10.0 * i, 2, 3,
                       50, 0.1 * i);
  }
  RecordTable table = load_csv_text(csv).table;
  std::vector<std::string> cols = {"AveragePrice", "4046"};
  CorrelationMatrix m = correlation_matrix(table, cols);
  EXPECT_NEAR(m.values.at(0, 1), -1.0, 1e-12);
}

TEST(CorrelationTest, DateAndYearHighlyCorrelated) {
  RecordTable table = gen_synthetic(1, 160, 25);  // spans four calendar years
  std::vector<std::string> cols = {"Date", "year"};
  CorrelationMatrix m = correlation_matrix(table, cols);
  EXPECT_GT(m.values.at(0, 1), 0.9);
}

TEST(CorrelationTest, ZeroVarianceMarkedUndefined) {
  RecordTable table = gen_synthetic(1, 20, 26);
  for (RawRecord& r : table.rows) r.weather = 0.25;
  std::vector<std::string> cols = {"AveragePrice", "weather"};
  CorrelationMatrix m = correlation_matrix(table, cols);
  EXPECT_TRUE(m.defined(0, 0));
  EXPECT_FALSE(m.defined(0, 1));
  EXPECT_FALSE(m.defined(1, 1));
}

TEST(CorrelationTest, RejectsUnknownColumnAndTinyTables) {
  RecordTable table = gen_synthetic(1, 20, 27);
  std::vector<std::string> bad = {"AveragePrice", "Totalbags"};
  EXPECT_THROW(correlation_matrix(table, bad), std::invalid_argument);
  RecordTable one;
  one.rows.push_back(table.rows[0]);
  std::vector<std::string> cols = {"AveragePrice", "weather"};
  EXPECT_THROW(correlation_matrix(one, cols), std::invalid_argument);
}

TEST(GenTest, DeterministicBySeed) {
  RecordTable a = gen_synthetic(2, 25, 7);
  RecordTable b = gen_synthetic(2, 25, 7);
  EXPECT_EQ(a.rows, b.rows);
  RecordTable c = gen_synthetic(2, 25, 8);
  EXPECT_NE(a.rows, c.rows);
}

TEST(GenTest, OrganicPricedAboveConventional) {
  for (std::uint64_t seed : {1u, 9u, 101u}) {
    RecordTable table = gen_synthetic(3, 52, seed);
    double organic = 0.0, conventional = 0.0;
    std::int64_t n_org = 0, n_conv = 0;
    for (const RawRecord& r : table.rows) {
      if (r.type == AvocadoType::organic) {
        organic += r.average_price;
        ++n_org;
      } else {
        conventional += r.average_price;
        ++n_conv;
      }
    }
    EXPECT_GT(organic / static_cast<double>(n_org), conventional / static_cast<double>(n_conv))
        << "seed " << seed;
  }
}

TEST(GenTest, RecoversConfiguredTrend) {
  RecordTable table = gen_synthetic(1, 156, 11);  // three full seasonal cycles
  auto series = group_series(table, nullptr);
  const auto& rows = series.at(SeriesKey{"Region01", AvocadoType::conventional});
  // Least-squares slope of price against week index.
  const double n = static_cast<double>(rows.size());
  double sum_t = 0.0, sum_p = 0.0, sum_tt = 0.0, sum_tp = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double t = static_cast<double>(i);
    sum_t += t;
    sum_p += rows[i].average_price;
    sum_tt += t * t;
    sum_tp += t * rows[i].average_price;
  }
  double slope = (n * sum_tp - sum_t * sum_p) / (n * sum_tt - sum_t * sum_t);
  EXPECT_GT(slope, kSyntheticTrendPerWeek / 3.0);
  EXPECT_LT(slope, kSyntheticTrendPerWeek * 3.0);
}

TEST(GenTest, VolumeMovesAgainstPrice) {
  RecordTable table = gen_synthetic(1, 104, 29);
  auto series = group_series(table, nullptr);
  RecordTable one_series;
  one_series.rows = series.at(SeriesKey{"Region01", AvocadoType::conventional});
  std::vector<std::string> cols = {"AveragePrice", "Salesvolume"};
  CorrelationMatrix m = correlation_matrix(one_series, cols);
  EXPECT_LT(m.values.at(0, 1), -0.3);
}

TEST(GenTest, RejectsBadArguments) {
  EXPECT_THROW(gen_synthetic(0, 10, 1), std::invalid_argument);
  EXPECT_THROW(gen_synthetic(1, 1, 1), std::invalid_argument);
}

TEST(TableCsvTest, RoundTripsThroughDisk) {
  RecordTable table = gen_synthetic(1, 12, 30);
  const auto path = std::filesystem::temp_directory_path() / "avocast_table_test.csv";
  write_table_csv(table, path);
  LoadResult loaded = load_csv(path);
  EXPECT_EQ(loaded.table.rows, table.rows);  // shortest-round-trip formatting is exact
  std::filesystem::remove(path);
}
