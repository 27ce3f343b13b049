#include "rnnfc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// nullopt for blank, `null`, non-numeric or non-finite cells.
std::optional<double> parse_price_cell(std::string_view cell) {
  if (cell.empty() || cell == "null") return std::nullopt;
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::size_t PriceSeries::missing_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const auto& v) { return !v; }));
}

std::vector<double> PriceSeries::present_values() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      throw DataError("missing value at " + format_date(dates[i]) + " in " + symbol);
    }
    out.push_back(*values[i]);
  }
  return out;
}

PriceSeries parse_ohlcv(std::string_view csv_text, std::string_view price_column,
                        std::string symbol) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= csv_text.size()) {
      auto nl = csv_text.find('\n', start);
      if (nl == std::string_view::npos) nl = csv_text.size();
      auto line = trim(csv_text.substr(start, nl - start));
      if (!line.empty()) lines.push_back(line);
      start = nl + 1;
    }
  }
  if (lines.empty()) throw SchemaError("empty CSV: no header row");

  // Strip a UTF-8 byte-order mark if present.
  std::string_view header_line = lines.front();
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  const auto header = split_fields(header_line);
  const auto find_column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto date_col = find_column("Date");
  if (!date_col) throw SchemaError("CSV header has no `Date` column");
  const auto price_col = find_column(price_column);
  if (!price_col) {
    throw SchemaError("CSV header has no `" + std::string(price_column) + "` column");
  }

  struct Row {
    Date date;
    std::optional<double> value;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    const std::string where = "row " + std::to_string(li + 1);
    if (fields.size() <= std::max(*date_col, *price_col)) {
      throw DataError(where + ": too few columns");
    }
    const auto date = parse_date(fields[*date_col]);
    if (!date) {
      throw DataError(where + ": unparseable date `" + std::string(fields[*date_col]) + "`");
    }
    const auto value = parse_price_cell(fields[*price_col]);
    if (value && *value <= 0.0) {
      throw DataError(where + ": non-positive price on " + format_date(*date));
    }
    rows.push_back({*date, value});
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date) {
      throw DataError("duplicate date " + format_date(rows[i].date));
    }
  }

  PriceSeries series;
  series.symbol = std::move(symbol);
  series.dates.reserve(rows.size());
  series.values.reserve(rows.size());
  for (const auto& r : rows) {
    series.dates.push_back(r.date);
    series.values.push_back(r.value);
  }
  return series;
}

PriceSeries load_ohlcv_file(const std::string& path, std::string_view price_column,
                            std::string symbol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ohlcv(buf.str(), price_column, std::move(symbol));
}

PriceSeries impute_locf(const PriceSeries& series) {
  PriceSeries out = series;
  std::optional<double> last;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.values[i]) {
      last = out.values[i];
    } else if (last) {
      out.values[i] = last;
    } else {
      throw DataError("cannot impute leading missing value at " +
                      format_date(out.dates[i]) + ": no prior observation");
    }
  }
  return out;
}

SplitResult chronological_split(const PriceSeries& series, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ContractViolation("train_fraction must lie in (0, 1)");
  }
  if (!series.fully_present()) throw DataError("split requires an imputed series");
  const std::size_t n = series.size();
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_fraction));
  if (n_train == 0 || n_train >= n) {
    throw DataError("split leaves an empty train or test segment");
  }

  const auto slice = [&](std::size_t from, std::size_t to) {
    PriceSeries part;
    part.symbol = series.symbol;
    part.dates.assign(series.dates.begin() + from, series.dates.begin() + to);
    part.values.assign(series.values.begin() + from, series.values.begin() + to);
    return part;
  };
  return {slice(0, n_train), slice(n_train, n)};
}

}  // namespace rnnfc
