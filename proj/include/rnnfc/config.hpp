#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rnnfc/ingest.hpp"
#include "rnnfc/rnn_core.hpp"
#include "rnnfc/training.hpp"

namespace rnnfc {

struct AssetEntry {
  std::string symbol;
  std::string path;  // resolved against the config's base directory
  std::size_t line = 0;
};

struct ExperimentConfig {
  std::vector<AssetEntry> assets;
  std::string price_column = "Close";
  std::size_t lookback = 60;
  SplitSpec split;
  std::vector<ArchSpec> architectures;
  TrainConfig train;
  std::string output_dir = "runs";
  std::uint64_t seed = 42;
  // Wall-clock seconds are written to train reports only when enabled, so
  // default reports stay byte-reproducible.
  bool record_wall_clock = false;

  const AssetEntry* find_asset(std::string_view symbol) const noexcept;
};

// Parses the key = value experiment grammar:
//
//   # comment
//   lookback = 60
//   architectures = lstm, gru, bilstm
//   [asset.BTC]
//   path = data/BTC-USD.csv
//
// Keys outside an `[asset.<SYMBOL>]` section (or inside `[experiment]`) are
// experiment-wide. Relative dataset paths are resolved against `base_dir`.
// Throws ConfigError listing every problem found, with line numbers.
ExperimentConfig validate_config(std::string_view config_text, const std::string& base_dir = {});

ExperimentConfig load_config(const std::string& path);

// Canonical text form; validate_config(render_config(c)) reproduces c.
std::string render_config(const ExperimentConfig& config);

}  // namespace rnnfc
