#include "rnnfc/reports.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson metrics_json(const MetricSet& m) {
  return {{"mse", m.mse}, {"mae", m.mae}, {"rmse", m.rmse}, {"mape", optional_number(m.mape)}};
}

ojson train_config_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"shuffle_seed", c.shuffle_seed},
          {"validation_fraction", c.validation_fraction}};
}

}  // namespace

std::string train_report_json(const TrainReport& report, bool include_seconds) {
  ojson epochs = ojson::array();
  for (const auto& e : report.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", optional_number(e.val_loss)},
                      {"seconds", include_seconds ? ojson(e.seconds) : ojson(nullptr)}});
  }
  const ojson doc = {{"config", train_config_json(report.config)},
                     {"train_windows", report.train_windows},
                     {"validation_windows", report.validation_windows},
                     {"checkpoint", report.checkpoint},
                     {"epochs", epochs}};
  return doc.dump(2) + "\n";
}

std::string eval_report_json(const EvalReport& report, std::string_view asset, CellKind kind,
                             const ScalerParams& scaler) {
  ojson pairs = ojson::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"date", format_date(p.date)},
                     {"actual", p.actual},
                     {"predicted", p.predicted}});
  }
  const ojson doc = {{"asset", asset},
                     {"cell_kind", to_string(kind)},
                     {"n", report.n},
                     {"scaler", {{"min", scaler.min_value()}, {"max", scaler.max_value()}}},
                     {"normalized", metrics_json(report.normalized)},
                     {"price", metrics_json(report.price)},
                     {"pairs", pairs}};
  return doc.dump(2) + "\n";
}

std::string predictions_csv(const EvalReport& report) {
  std::string out = "date,actual,predicted\n";
  char buf[96];
  for (const auto& p : report.pairs) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", p.actual, p.predicted);
    out += format_date(p.date);
    out += buf;
  }
  return out;
}

std::string comparison_json(const ComparisonTable& table) {
  ojson rows = ojson::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"asset", r.asset},
                    {"cell_kind", to_string(r.cell_kind)},
                    {"normalized", metrics_json(r.normalized)},
                    {"price", metrics_json(r.price)},
                    {"best", r.best}});
  }
  ojson failures = ojson::array();
  for (const auto& f : table.failures) {
    failures.push_back({{"asset", f.asset},
                        {"cell_kind", to_string(f.cell_kind)},
                        {"error", f.error.value_or("")},
                        {"epoch", f.failed_epoch ? ojson(*f.failed_epoch) : ojson(nullptr)}});
  }
  const ojson doc = {{"rows", rows}, {"failures", failures}};
  return doc.dump(2) + "\n";
}

std::string prepare_report_json(const PreparedAsset& asset, std::size_t lookback) {
  const auto& train = asset.split.train;
  const auto& test = asset.split.test;
  const ojson doc = {
      {"asset", asset.symbol},
      {"rows", asset.raw.size()},
      {"missing_values", asset.raw.missing_count()},
      {"first_date", format_date(asset.raw.dates.front())},
      {"last_date", format_date(asset.raw.dates.back())},
      {"train", {{"size", train.size()},
                 {"first_date", format_date(train.dates.front())},
                 {"last_date", format_date(train.dates.back())}}},
      {"test", {{"size", test.size()},
                {"first_date", format_date(test.dates.front())},
                {"last_date", format_date(test.dates.back())}}},
      {"scaler", {{"min", asset.scaler.min_value()}, {"max", asset.scaler.max_value()}}},
      {"lookback", lookback},
      {"train_windows", asset.train_windows.size()},
      {"test_windows", asset.test_windows.size()}};
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rnnfc
