#pragma once

#include <string>
#include <string_view>

#include "rnnfc/experiment.hpp"
#include "rnnfc/metrics.hpp"
#include "rnnfc/training.hpp"

namespace rnnfc {

// Serialized documents. Numbers are written in shortest round-trip form so
// identical inputs give byte-identical files.
//
// train_report.json:
//   {"config": {...}, "train_windows", "validation_windows", "checkpoint",
//    "epochs": [{"epoch", "train_loss", "val_loss", "seconds"}]}
// `seconds` is null unless `include_seconds`; `val_loss` is null without a
// validation tail.
std::string train_report_json(const TrainReport& report, bool include_seconds);

// eval_report.json:
//   {"asset", "cell_kind", "n", "scaler": {"min", "max"},
//    "normalized": {"mse", "mae", "rmse", "mape"}, "price": {...},
//    "pairs": [{"date", "actual", "predicted"}]}
std::string eval_report_json(const EvalReport& report, std::string_view asset,
                             CellKind kind, const ScalerParams& scaler);

// predictions.csv: header `date,actual,predicted`, price scale.
std::string predictions_csv(const EvalReport& report);

// comparison.json: {"rows": [{"asset", "cell_kind", "normalized", "price",
// "best"}], "failures": [{"asset", "cell_kind", "error", "epoch"}]}
std::string comparison_json(const ComparisonTable& table);

// Summary of ingest/split/scaling for one asset (the `prepare` subcommand).
std::string prepare_report_json(const PreparedAsset& asset, std::size_t lookback);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace rnnfc
