#include <gtest/gtest.h>

#include <random>

#include "rnnfc/errors.hpp"
#include "rnnfc/ingest.hpp"

namespace rnnfc {
namespace {

constexpr const char* kHeader = "Date,Open,High,Low,Close,Adj Close,Volume\n";

std::string csv(const std::vector<std::string>& rows) {
  std::string out = kHeader;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

TEST(ParseDate, AcceptsIsoAndRejectsMalformed) {
  const auto d = parse_date("2019-03-04");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_date(*d), "2019-03-04");
  EXPECT_FALSE(parse_date("2019-3-04"));
  EXPECT_FALSE(parse_date("2019-02-30"));
  EXPECT_FALSE(parse_date("04/03/2019"));
  EXPECT_FALSE(parse_date(""));
}

TEST(ParseOhlcv, ReadsCloseColumnInDateOrder) {
  const auto s = parse_ohlcv(csv({"2020-01-02,1,1,1,11.5,11.5,10", "2020-01-01,1,1,1,10,10,10"}),
                             "Close", "BTC");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.symbol, "BTC");
  EXPECT_EQ(format_date(s.dates[0]), "2020-01-01");
  EXPECT_DOUBLE_EQ(*s.values[0], 10.0);
  EXPECT_DOUBLE_EQ(*s.values[1], 11.5);
}

TEST(ParseOhlcv, NullAndBlankCellsBecomeMissing) {
  const auto s = parse_ohlcv(
      csv({"2020-01-01,1,1,1,10,10,1", "2020-01-02,null,null,null,null,null,null",
           "2020-01-03,1,1,1,,,1", "2020-01-04,1,1,1,abc,abc,1"}),
      "Close");
  EXPECT_EQ(s.missing_count(), 3u);
  EXPECT_FALSE(s.fully_present());
  EXPECT_THROW(s.present_values(), DataError);
}

TEST(ParseOhlcv, MissingPriceColumnIsSchemaError) {
  EXPECT_THROW(parse_ohlcv("Date,Open\n2020-01-01,1\n", "Close"), SchemaError);
  EXPECT_THROW(parse_ohlcv("Open,Close\n1,1\n", "Close"), SchemaError);
}

TEST(ParseOhlcv, RejectsNonPositivePriceAndDuplicateDate) {
  EXPECT_THROW(parse_ohlcv(csv({"2020-01-01,1,1,1,0,0,1"}), "Close"), DataError);
  EXPECT_THROW(parse_ohlcv(csv({"2020-01-01,1,1,1,-3,-3,1"}), "Close"), DataError);
  EXPECT_THROW(parse_ohlcv(csv({"2020-01-01,1,1,1,3,3,1", "2020-01-01,1,1,1,4,4,1"}), "Close"),
               DataError);
}

TEST(ParseOhlcv, MinimalDateCloseFile) {
  const auto s = parse_ohlcv("Date,Close\n2019-01-01,3843.52\n2019-01-02,3943.41\n", "Close");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.fully_present());
  EXPECT_DOUBLE_EQ(*s.values[0], 3843.52);
  EXPECT_DOUBLE_EQ(*s.values[1], 3943.41);
  EXPECT_THROW(parse_ohlcv("Date,Close\n2019-01-01,1\n2019-01-01,2\n", "Close"), DataError);
  const auto gap = parse_ohlcv("Date,Close\n2019-01-01,1\n2019-01-02,\n", "Close");
  EXPECT_FALSE(gap.values[1].has_value());
  EXPECT_EQ(format_date(gap.dates[1]), "2019-01-02");
}

TEST(ParseOhlcv, SelectsAlternativePriceColumn) {
  const auto s = parse_ohlcv(csv({"2020-01-01,1,2,3,4,5,6"}), "Adj Close");
  EXPECT_DOUBLE_EQ(*s.values[0], 5.0);
}

PriceSeries daily(std::vector<std::optional<double>> values,
                  std::chrono::sys_days day = std::chrono::year{2020} / 1 / 1) {
  PriceSeries s;
  s.symbol = "T";
  for (auto v : values) {
    s.dates.emplace_back(day);
    s.values.push_back(v);
    day += std::chrono::days{1};
  }
  return s;
}

TEST(ImputeLocf, CarriesLastObservationForward) {
  const auto s = impute_locf(daily({1.0, std::nullopt, std::nullopt, 4.0, std::nullopt}));
  EXPECT_EQ(s.present_values(), (std::vector<double>{1.0, 1.0, 1.0, 4.0, 4.0}));
}

TEST(ImputeLocf, SmallCases) {
  EXPECT_EQ(impute_locf(daily({10.0, std::nullopt, 12.0})).present_values(),
            (std::vector<double>{10.0, 10.0, 12.0}));
  EXPECT_EQ(impute_locf(daily({10.0, std::nullopt, std::nullopt})).present_values(),
            (std::vector<double>{10.0, 10.0, 10.0}));
  const auto full = daily({3.0, 1.0, 2.0});
  EXPECT_EQ(impute_locf(full).values, full.values);
}

TEST(ImputeLocf, LeadingGapIsDataError) {
  EXPECT_THROW(impute_locf(daily({std::nullopt, 2.0})), DataError);
}

TEST(ImputeLocf, IsIdempotent) {
  std::mt19937_64 rng(3);
  std::vector<std::optional<double>> v{1.0};
  for (int i = 0; i < 200; ++i) {
    if (rng() % 4 == 0) v.push_back(std::nullopt);
    else v.push_back(1.0 + static_cast<double>(rng() % 1000));
  }
  const auto once = impute_locf(daily(v));
  const auto twice = impute_locf(once);
  EXPECT_EQ(once.values, twice.values);
  EXPECT_EQ(once.dates, twice.dates);
}

TEST(ChronologicalSplit, FloorOfFractionGoesToTrain) {
  std::vector<std::optional<double>> v;
  for (int i = 0; i < 11; ++i) v.push_back(1.0 + i);
  const auto r = chronological_split(daily(v), {0.8});
  EXPECT_EQ(r.train.size(), 8u);
  EXPECT_EQ(r.test.size(), 3u);
  EXPECT_DOUBLE_EQ(*r.test.values[0], 9.0);
}

TEST(ChronologicalSplit, SmallCases) {
  const auto ten = chronological_split(daily(std::vector<std::optional<double>>(10, 1.0)), {0.8});
  EXPECT_EQ(ten.train.size(), 8u);
  EXPECT_EQ(ten.test.size(), 2u);
  const auto five = chronological_split(daily({1.0, 2.0, 3.0, 4.0, 5.0}), {0.5});
  EXPECT_EQ(five.train.size(), 2u);
  EXPECT_EQ(five.test.size(), 3u);
}

TEST(ChronologicalSplit, FiveYearDailyBoundary) {
  const auto first = std::chrono::sys_days{std::chrono::year{2019} / 1 / 1};
  const auto last = std::chrono::sys_days{std::chrono::year{2024} / 1 / 1};
  const auto n = static_cast<std::size_t>((last - first).count()) + 1;
  const auto r = chronological_split(daily(std::vector<std::optional<double>>(n, 1.0), first), {0.8});
  EXPECT_EQ(format_date(r.train.dates.front()), "2019-01-01");
  EXPECT_EQ(format_date(r.test.dates.front()), "2023-01-01");
}

TEST(ChronologicalSplit, RejectsBadInputs) {
  std::vector<std::optional<double>> v(20, 1.0);
  EXPECT_THROW(chronological_split(daily(v), {0.0}), ContractViolation);
  EXPECT_THROW(chronological_split(daily(v), {1.0}), ContractViolation);
  EXPECT_THROW(chronological_split(daily({1.0, 2.0, 3.0}), {0.3}), DataError);
  EXPECT_THROW(chronological_split(daily({1.0}), {0.5}), DataError);
  v[5] = std::nullopt;
  EXPECT_THROW(chronological_split(daily(v), {0.8}), DataError);
}

TEST(ChronologicalSplit, PropertyConcatenationRestoresSeriesAndDatesIncrease) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + rng() % 300;
    std::vector<std::optional<double>> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(1.0 + static_cast<double>(rng() % 977));
    const double f = 0.2 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0;
    const auto series = daily(v);
    const auto r = chronological_split(series, {f});
    auto dates = r.train.dates;
    dates.insert(dates.end(), r.test.dates.begin(), r.test.dates.end());
    auto values = r.train.values;
    values.insert(values.end(), r.test.values.begin(), r.test.values.end());
    EXPECT_EQ(dates, series.dates);
    EXPECT_EQ(values, series.values);
    EXPECT_LT(r.train.dates.back(), r.test.dates.front());
  }
}

TEST(Fixtures, BundledSeriesParseWithoutGaps) {
  for (const char* sym : {"BTC", "ETH", "LTC"}) {
    const auto s = load_ohlcv_file(std::string(RNNFC_DATA_DIR) + "/" + sym + "-USD.csv", "Close", sym);
    EXPECT_GT(s.size(), 900u) << sym;
    EXPECT_EQ(s.missing_count(), 0u) << sym;
    for (std::size_t i = 1; i < s.size(); ++i) ASSERT_LT(s.dates[i - 1], s.dates[i]);
  }
}

}  // namespace
}  // namespace rnnfc
