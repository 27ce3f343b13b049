#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rnnfc {

using Date = std::chrono::year_month_day;

// Parses a strict ISO `YYYY-MM-DD` date. Returns nullopt on any malformation.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

// Daily univariate price history for one asset. A value is either a finite
// strictly positive price or missing (nullopt).
struct PriceSeries {
  std::string symbol;
  std::vector<Date> dates;
  std::vector<std::optional<double>> values;

  std::size_t size() const noexcept { return dates.size(); }
  std::size_t missing_count() const noexcept;
  bool fully_present() const noexcept { return missing_count() == 0; }

  // Present values in order. Throws DataError if any entry is missing.
  std::vector<double> present_values() const;
};

struct SplitSpec {
  double train_fraction = 0.8;
};

struct SplitResult {
  PriceSeries train;
  PriceSeries test;
};

// Reads a Yahoo-style daily OHLCV export. Only `Date` and `price_column` are
// interpreted; other columns are tolerated and ignored. Blank, `null`, or
// non-numeric price cells become missing entries. Rows are sorted by date.
PriceSeries parse_ohlcv(std::string_view csv_text, std::string_view price_column,
                        std::string symbol = {});

PriceSeries load_ohlcv_file(const std::string& path, std::string_view price_column,
                            std::string symbol = {});

// Last observation carried forward.
PriceSeries impute_locf(const PriceSeries& series);

// First floor(n * train_fraction) entries train, the rest test.
SplitResult chronological_split(const PriceSeries& series, const SplitSpec& spec);

}  // namespace rnnfc
