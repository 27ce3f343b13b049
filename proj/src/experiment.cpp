#include "rnnfc/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>

#include "rnnfc/checkpoint.hpp"
#include "rnnfc/errors.hpp"
#include "rnnfc/reports.hpp"

namespace rnnfc {

namespace {

namespace fs = std::filesystem;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xCBF29CE484222325ULL) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::string_view asset, CellKind kind) {
  std::uint64_t h = fnv1a(asset);
  h = fnv1a("|", h);
  h = fnv1a(to_string(kind), h);
  return splitmix64(master_seed ^ splitmix64(h));
}

std::uint64_t derive_shuffle_seed(std::uint64_t run_seed) {
  return splitmix64(run_seed ^ 0x53485546464C45ULL);
}

std::string run_directory(const std::string& output_dir, std::string_view asset, CellKind kind) {
  return (fs::path(output_dir) / std::string(asset) / std::string(to_string(kind))).string();
}

PreparedAsset prepare_series(const PriceSeries& raw, std::size_t lookback, const SplitSpec& split) {
  PreparedAsset p;
  p.symbol = raw.symbol;
  p.raw = raw;
  p.imputed = impute_locf(raw);
  p.split = chronological_split(p.imputed, split);
  const auto train_values = p.split.train.present_values();
  const auto test_values = p.split.test.present_values();
  p.scaler = fit_scaler(train_values);
  p.train_normalized = transform(p.scaler, train_values);
  p.test_normalized = transform(p.scaler, test_values);
  p.train_windows = make_windows(p.train_normalized, lookback);
  p.test_windows = make_test_windows(p.train_normalized, p.test_normalized, lookback);
  return p;
}

PreparedAsset prepare_asset(const ExperimentConfig& config, const AssetEntry& asset) {
  const auto raw = load_ohlcv_file(asset.path, config.price_column, asset.symbol);
  return prepare_series(raw, config.lookback, config.split);
}

ComparisonTable build_comparison(const std::vector<RunOutcome>& outcomes) {
  ComparisonTable table;
  std::map<std::string, std::size_t> best;
  for (const auto& o : outcomes) {
    if (!o.eval) {
      table.failures.push_back(o);
      continue;
    }
    table.rows.push_back({o.asset, o.cell_kind, o.eval->normalized, o.eval->price, false});
    const std::size_t idx = table.rows.size() - 1;
    auto it = best.find(o.asset);
    if (it == best.end() || table.rows[idx].price.rmse < table.rows[it->second].price.rmse) {
      best[o.asset] = idx;
    }
  }
  for (const auto& [asset, idx] : best) table.rows[idx].best = true;
  return table;
}

RunOutcome run_single(const ExperimentConfig& config, const PreparedAsset& asset,
                      const ArchSpec& arch, const std::string& run_dir,
                      const ProgressSink& progress) {
  RunOutcome outcome;
  outcome.asset = asset.symbol;
  outcome.cell_kind = arch.cell_kind;
  outcome.seed = derive_run_seed(config.seed, asset.symbol, arch.cell_kind);
  outcome.directory = run_dir;

  const std::string label = asset.symbol + "/" + std::string(to_string(arch.cell_kind));
  try {
    fs::create_directories(run_dir);
    TrainConfig tc = config.train;
    tc.shuffle_seed = derive_shuffle_seed(outcome.seed);
    const ModelParams initial = init_params(arch, outcome.seed);

    EpochCallback on_epoch;
    if (progress) {
      on_epoch = [&](const EpochRecord& e) {
        std::string line = label + " epoch " + std::to_string(e.epoch) + " train_loss " +
                           std::to_string(e.train_loss);
        if (e.val_loss) line += " val_loss " + std::to_string(*e.val_loss);
        progress(line);
      };
    }
    TrainResult trained = train(initial, asset.train_windows, tc, on_epoch);

    save_checkpoint(trained.model, (fs::path(run_dir) / "checkpoint.json").string());
    trained.report.checkpoint = "checkpoint.json";
    write_text_file((fs::path(run_dir) / "train_report.json").string(),
                    train_report_json(trained.report, config.record_wall_clock));

    EvalReport eval = evaluate(trained.model, asset.test_windows, asset.scaler, asset.split.test.dates);
    write_text_file((fs::path(run_dir) / "eval_report.json").string(),
                    eval_report_json(eval, asset.symbol, arch.cell_kind, asset.scaler));
    write_text_file((fs::path(run_dir) / "predictions.csv").string(), predictions_csv(eval));
    outcome.eval = std::move(eval);
  } catch (const DivergenceError& e) {
    outcome.error = e.what();
    outcome.failed_epoch = e.epoch();
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  if (progress && outcome.error) progress(label + " FAILED: " + *outcome.error);
  return outcome;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressSink& progress) {
  std::vector<ConfigDiagnostic> missing;
  for (const auto& a : config.assets) {
    if (!fs::is_regular_file(a.path)) {
      missing.push_back({a.line, "dataset for `" + a.symbol + "` not found: " + a.path});
    }
  }
  if (config.assets.empty()) missing.push_back({0, "no assets configured"});
  if (config.architectures.empty()) missing.push_back({0, "no architectures configured"});
  if (!missing.empty()) throw ConfigError(missing);

  std::vector<PreparedAsset> prepared;
  prepared.reserve(config.assets.size());
  for (const auto& a : config.assets) prepared.push_back(prepare_asset(config, a));

  ExperimentResult result;
  result.output_dir = config.output_dir;
  fs::create_directories(config.output_dir);
  for (const auto& asset : prepared) {
    for (const auto& arch : config.architectures) {
      const auto dir = run_directory(config.output_dir, asset.symbol, arch.cell_kind);
      result.outcomes.push_back(run_single(config, asset, arch, dir, progress));
    }
  }
  result.table = build_comparison(result.outcomes);
  write_text_file((fs::path(config.output_dir) / "comparison.json").string(),
                  comparison_json(result.table));
  return result;
}

EvalReport evaluate_checkpoint(const ExperimentConfig& config, const AssetEntry& asset,
                               const ModelParams& model) {
  const PreparedAsset prepared = prepare_asset(config, asset);
  return evaluate(model, prepared.test_windows, prepared.scaler, prepared.split.test.dates);
}

}  // namespace rnnfc
