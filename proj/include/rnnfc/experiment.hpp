#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rnnfc/config.hpp"
#include "rnnfc/ingest.hpp"
#include "rnnfc/metrics.hpp"
#include "rnnfc/preprocess.hpp"
#include "rnnfc/rnn_core.hpp"
#include "rnnfc/training.hpp"

namespace rnnfc {

// Per-run seeds: a pure function of (master seed, asset, cell kind).
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::string_view asset, CellKind kind);
std::uint64_t derive_shuffle_seed(std::uint64_t run_seed);

// One asset after ingest -> impute -> split -> scale -> window.
struct PreparedAsset {
  std::string symbol;
  PriceSeries raw;
  PriceSeries imputed;
  SplitResult split;
  ScalerParams scaler = ScalerParams::from_bounds(0.0, 1.0);
  std::vector<double> train_normalized;
  std::vector<double> test_normalized;
  SequenceBatch train_windows;
  SequenceBatch test_windows;  // targets are the test segment, bootstrapped from train
};

PreparedAsset prepare_series(const PriceSeries& raw, std::size_t lookback, const SplitSpec& split);
PreparedAsset prepare_asset(const ExperimentConfig& config, const AssetEntry& asset);

struct RunOutcome {
  std::string asset;
  CellKind cell_kind = CellKind::LSTM;
  std::uint64_t seed = 0;
  std::optional<EvalReport> eval;      // set on success
  std::optional<std::string> error;    // set on failure
  std::optional<std::size_t> failed_epoch;
  std::string directory;
};

struct ComparisonRow {
  std::string asset;
  CellKind cell_kind = CellKind::LSTM;
  MetricSet normalized;
  MetricSet price;
  bool best = false;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<RunOutcome> failures;
};

// Marks, per asset, the row with the lowest price-scale RMSE.
ComparisonTable build_comparison(const std::vector<RunOutcome>& outcomes);

using ProgressSink = std::function<void(const std::string&)>;

// Trains and evaluates one (asset, architecture) run and writes its
// train_report.json, eval_report.json, checkpoint.json and predictions.csv
// into `run_dir`. Errors are captured in the outcome, not thrown.
RunOutcome run_single(const ExperimentConfig& config, const PreparedAsset& asset,
                      const ArchSpec& arch, const std::string& run_dir,
                      const ProgressSink& progress = {});

struct ExperimentResult {
  std::string output_dir;
  std::vector<RunOutcome> outcomes;
  ComparisonTable table;
  bool ok() const noexcept { return table.failures.empty(); }
};

// Every asset x architecture; writes <out>/<SYMBOL>/<kind>/... and
// <out>/comparison.json. Config/schema problems throw before any training.
ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressSink& progress = {});

// Re-evaluates a saved checkpoint against the asset's test segment.
EvalReport evaluate_checkpoint(const ExperimentConfig& config, const AssetEntry& asset,
                               const ModelParams& model);

std::string run_directory(const std::string& output_dir, std::string_view asset, CellKind kind);

}  // namespace rnnfc
