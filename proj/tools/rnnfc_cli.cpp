// rnnfc: experiment driver for the recurrent price-forecasting engine.
//
//   rnnfc prepare   --config exp.cfg [--out dir]
//   rnnfc train     --config exp.cfg --asset BTC --arch lstm [--seed N] [--out dir]
//   rnnfc evaluate  --config exp.cfg --asset BTC --checkpoint ckpt.json [--out dir]
//   rnnfc run       --config exp.cfg [--seed N] [--out dir]
//   rnnfc gradcheck [--arch all] [--hidden 4] [--lookback 5] [--trials 20]

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "rnnfc/checkpoint.hpp"
#include "rnnfc/config.hpp"
#include "rnnfc/errors.hpp"
#include "rnnfc/experiment.hpp"
#include "rnnfc/reports.hpp"

namespace fs = std::filesystem;
using namespace rnnfc;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  ExperimentConfig cfg = load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

const AssetEntry& require_asset(const ExperimentConfig& cfg, const std::string& symbol) {
  const AssetEntry* a = cfg.find_asset(symbol);
  if (!a) throw ConfigError({{0, "asset `" + symbol + "` is not defined in the config"}});
  if (!fs::is_regular_file(a->path)) {
    throw ConfigError({{a->line, "dataset for `" + symbol + "` not found: " + a->path}});
  }
  return *a;
}

ProgressSink stderr_progress(bool quiet) {
  if (quiet) return {};
  return [](const std::string& line) { std::cerr << line << '\n'; };
}

int cmd_prepare(const CommonOptions& opts) {
  const auto cfg = load_with_overrides(opts);
  for (const auto& a : cfg.assets) {
    const auto prepared = prepare_asset(cfg, a);
    const auto doc = prepare_report_json(prepared, cfg.lookback);
    if (opts.out_dir.empty()) {
      std::cout << doc;
    } else {
      const auto dir = fs::path(opts.out_dir) / a.symbol;
      fs::create_directories(dir);
      write_text_file((dir / "prepare.json").string(), doc);
    }
  }
  return 0;
}

int cmd_train(const CommonOptions& opts, const std::string& asset, const std::string& arch_name) {
  const auto cfg = load_with_overrides(opts);
  const auto kind = parse_cell_kind(arch_name);
  if (!kind) throw ConfigError({{0, "unknown architecture `" + arch_name + "`"}});
  ArchSpec arch;
  bool found = false;
  for (const auto& a : cfg.architectures) {
    if (a.cell_kind == *kind) {
      arch = a;
      found = true;
    }
  }
  if (!found) {
    arch = cfg.architectures.empty() ? ArchSpec{} : cfg.architectures.front();
    arch.cell_kind = *kind;
  }
  const auto prepared = prepare_asset(cfg, require_asset(cfg, asset));
  const auto dir = run_directory(cfg.output_dir, asset, *kind);
  const auto outcome = run_single(cfg, prepared, arch, dir, stderr_progress(opts.quiet));
  if (outcome.error) {
    std::cerr << "run failed: " << *outcome.error << '\n';
    return 1;
  }
  std::cout << "wrote " << dir << '\n';
  return 0;
}

int cmd_evaluate(const CommonOptions& opts, const std::string& asset,
                 const std::string& checkpoint_path) {
  const auto cfg = load_with_overrides(opts);
  const auto& entry = require_asset(cfg, asset);
  const ModelParams model = load_checkpoint(checkpoint_path);
  const auto prepared = prepare_asset(cfg, entry);
  const EvalReport report =
      evaluate(model, prepared.test_windows, prepared.scaler, prepared.split.test.dates);
  const auto doc = eval_report_json(report, asset, model.arch.cell_kind, prepared.scaler);
  if (opts.out_dir.empty()) {
    std::cout << doc;
  } else {
    fs::create_directories(opts.out_dir);
    write_text_file((fs::path(opts.out_dir) / "eval_report.json").string(), doc);
    write_text_file((fs::path(opts.out_dir) / "predictions.csv").string(), predictions_csv(report));
  }
  return 0;
}

int cmd_run(const CommonOptions& opts) {
  const auto cfg = load_with_overrides(opts);
  const auto result = run_experiment(cfg, stderr_progress(opts.quiet));
  for (const auto& row : result.table.rows) {
    std::cout << row.asset << ' ' << to_string(row.cell_kind) << " rmse(norm)=" << row.normalized.rmse
              << " mape(price)=" << row.price.mape.value_or(-1.0) << (row.best ? " *best*" : "")
              << '\n';
  }
  for (const auto& f : result.table.failures) {
    std::cout << f.asset << ' ' << to_string(f.cell_kind) << " FAILED: " << f.error.value_or("")
              << '\n';
  }
  std::cout << "artifacts in " << result.output_dir << '\n';
  return result.ok() ? 0 : 1;
}

struct GradcheckOptions {
  std::string arch = "all";
  GradCheckTrials trials;
  double tolerance = 1e-4;
};

int cmd_gradcheck(const GradcheckOptions& g) {
  std::vector<CellKind> kinds;
  if (g.arch == "all") {
    kinds = {CellKind::LSTM, CellKind::GRU, CellKind::BiLSTM};
  } else if (auto k = parse_cell_kind(g.arch)) {
    kinds = {*k};
  } else {
    throw ConfigError({{0, "unknown architecture `" + g.arch + "`"}});
  }

  double worst = 0.0;
  for (CellKind kind : kinds) {
    const auto s = gradcheck_trials(kind, g.trials);
    std::cout << to_string(kind) << " trials " << s.trials << " max_relative_error "
              << s.worst.max_relative_error << " (trial " << s.worst_trial << ", parameter "
              << s.worst.worst_index << ", analytic " << s.worst.worst_analytic << ", numeric "
              << s.worst.worst_numeric << ")\n";
    worst = std::max(worst, s.worst.max_relative_error);
  }
  const bool ok = worst <= g.tolerance;
  std::cout << (ok ? "PASS" : "FAIL") << " worst " << worst << " tolerance " << g.tolerance << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent-network price forecasting experiments"};
  app.require_subcommand(1);

  CommonOptions common;
  const auto add_common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--config", common.config_path, "Experiment config file")->required();
    sub->add_option("--out", common.out_dir, "Output directory (overrides output_dir)");
    if (needs_seed) sub->add_option("--seed", common.seed, "Master seed (overrides seed)");
    sub->add_flag("-q,--quiet", common.quiet, "Suppress per-epoch progress");
  };

  auto* prepare = app.add_subcommand("prepare", "Ingest, impute, split and scale each asset");
  add_common(prepare, false);

  std::string asset;
  std::string arch;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate one asset/architecture run");
  add_common(train_cmd, true);
  train_cmd->add_option("--asset", asset, "Asset symbol")->required();
  train_cmd->add_option("--arch", arch, "lstm, gru or bilstm")->required();

  std::string checkpoint;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on an asset's test segment");
  add_common(eval_cmd, false);
  eval_cmd->add_option("--asset", asset, "Asset symbol")->required();
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required();

  auto* run_cmd = app.add_subcommand("run", "Run every asset x architecture and write a comparison");
  add_common(run_cmd, true);

  GradcheckOptions gc;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Check BPTT gradients against finite differences");
  grad_cmd->add_option("--arch", gc.arch, "lstm, gru, bilstm or all");
  grad_cmd->add_option("--hidden", gc.trials.hidden_units, "Hidden units per direction")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--layers", gc.trials.layers, "Recurrent layers")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--lookback", gc.trials.lookback, "Window length")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--trials", gc.trials.trials, "Random models per architecture")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--epsilon", gc.trials.epsilon, "Central-difference step")->check(CLI::Range(1e-7, 1e-3));
  grad_cmd->add_option("--tolerance", gc.tolerance, "Maximum accepted relative error");
  grad_cmd->add_option("--seed", gc.trials.seed, "Seed for the random models");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prepare) return cmd_prepare(common);
    if (*train_cmd) return cmd_train(common, asset, arch);
    if (*eval_cmd) return cmd_evaluate(common, asset, checkpoint);
    if (*run_cmd) return cmd_run(common);
    if (*grad_cmd) return cmd_gradcheck(gc);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
