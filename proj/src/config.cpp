#include "rnnfc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

std::string join_diagnostics(const std::vector<ConfigDiagnostic>& diags) {
  std::string out = "invalid experiment config:";
  for (const auto& d : diags) {
    out += "\n  ";
    out += d.line > 0 ? "line " + std::to_string(d.line) + ": " : std::string("config: ");
    out += d.message;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool valid_symbol(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::string base_dir) : base_dir_(std::move(base_dir)) {
    read(text);
  }

  ExperimentConfig build() {
    ExperimentConfig cfg;
    apply_globals(cfg);
    apply_assets(cfg);
    if (!diags_.empty()) throw ConfigError(diags_);
    return cfg;
  }

 private:
  void error(std::size_t line, std::string message) {
    diags_.push_back({line, std::move(message)});
  }

  void read(std::string_view text) {
    std::size_t line_no = 0;
    std::optional<std::string> section;  // asset symbol, nullopt = experiment-wide
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      const auto line = trim(text.substr(start, nl - start));
      start = nl + 1;
      ++line_no;
      if (line.empty() || line.front() == '#' || line.front() == ';') continue;

      if (line.front() == '[') {
        if (line.back() != ']') {
          error(line_no, "malformed section header `" + std::string(line) + "`");
          section.reset();
          skip_section_ = true;
          continue;
        }
        const auto name = trim(line.substr(1, line.size() - 2));
        skip_section_ = false;
        if (name == "experiment") {
          section.reset();
        } else if (name.substr(0, 6) == "asset.") {
          const std::string symbol(trim(name.substr(6)));
          if (!valid_symbol(symbol)) {
            error(line_no, "invalid asset symbol `" + symbol + "`");
            skip_section_ = true;
          } else if (asset_lines_.count(symbol) != 0) {
            error(line_no, "duplicate asset `" + symbol + "` (first declared on line " +
                               std::to_string(asset_lines_[symbol]) + ")");
            skip_section_ = true;
          } else {
            asset_lines_[symbol] = line_no;
            asset_order_.push_back(symbol);
          }
          section = symbol;
        } else {
          error(line_no, "unknown section `[" + std::string(name) + "]`");
          skip_section_ = true;
        }
        continue;
      }

      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        error(line_no, "expected `key = value`, got `" + std::string(line) + "`");
        continue;
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) {
        error(line_no, "empty key");
        continue;
      }
      if (skip_section_) continue;
      auto& scope = section ? assets_[*section] : globals_;
      if (auto it = scope.find(key); it != scope.end()) {
        error(line_no, "duplicate key `" + key + "` (first set on line " +
                           std::to_string(it->second.line) + ")");
        continue;
      }
      scope[key] = {value, line_no};
    }
  }

  template <typename T>
  void take_unsigned(const std::string& key, T& out, T min_value) {
    auto it = globals_.find(key);
    if (it == globals_.end()) return;
    const auto v = parse_number<T>(it->second.value);
    if (!v) {
      error(it->second.line, key + " must be a non-negative integer");
    } else if (*v < min_value) {
      error(it->second.line, key + " must be >= " + std::to_string(min_value) + ", got " +
                                 it->second.value);
    } else {
      out = *v;
    }
  }

  // Accepts values in the interval described by `check`; `range` names it.
  template <typename Check>
  void take_double(const std::string& key, double& out, Check check, const char* range) {
    auto it = globals_.find(key);
    if (it == globals_.end()) return;
    const auto v = parse_number<double>(it->second.value);
    if (!v || !std::isfinite(*v)) {
      error(it->second.line, key + " must be a number");
    } else if (!check(*v)) {
      error(it->second.line, key + " out of range " + range + ": " + it->second.value);
    } else {
      out = *v;
    }
  }

  void apply_globals(ExperimentConfig& cfg) {
    static const std::set<std::string> known = {
        "price_column", "lookback",      "train_fraction", "architectures",
        "layers",       "hidden_units",  "batch_size",     "epochs",
        "learning_rate", "adam_beta1",   "adam_beta2",     "adam_epsilon",
        "validation_fraction", "seed",   "output_dir",     "record_wall_clock"};
    for (const auto& [key, entry] : globals_) {
      if (known.count(key) == 0) error(entry.line, "unknown key `" + key + "`");
    }

    if (auto it = globals_.find("price_column"); it != globals_.end()) {
      if (it->second.value.empty()) {
        error(it->second.line, "price_column must not be empty");
      } else {
        cfg.price_column = it->second.value;
      }
    }
    take_unsigned<std::size_t>("lookback", cfg.lookback, 1);
    take_double("train_fraction", cfg.split.train_fraction,
                [](double v) { return v > 0.0 && v < 1.0; }, "(0, 1)");

    std::size_t layers = 2;
    std::size_t hidden = 100;
    take_unsigned<std::size_t>("layers", layers, 1);
    take_unsigned<std::size_t>("hidden_units", hidden, 1);

    std::vector<CellKind> kinds = {CellKind::LSTM, CellKind::GRU, CellKind::BiLSTM};
    if (auto it = globals_.find("architectures"); it != globals_.end()) {
      kinds.clear();
      std::set<CellKind> seen;
      std::stringstream ss(it->second.value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto name = trim(item);
        const auto kind = parse_cell_kind(name);
        if (!kind) {
          error(it->second.line, "unknown architecture `" + std::string(name) + "`");
        } else if (!seen.insert(*kind).second) {
          error(it->second.line, "duplicate architecture `" + std::string(name) + "`");
        } else {
          kinds.push_back(*kind);
        }
      }
      if (kinds.empty() && seen.empty()) error(it->second.line, "architectures list is empty");
    }
    for (CellKind k : kinds) {
      ArchSpec arch;
      arch.cell_kind = k;
      arch.layers = layers;
      arch.hidden_units = hidden;
      cfg.architectures.push_back(arch);
    }

    take_unsigned<std::size_t>("batch_size", cfg.train.batch_size, 1);
    take_unsigned<std::size_t>("epochs", cfg.train.epochs, 1);
    take_double("learning_rate", cfg.train.learning_rate, [](double v) { return v > 0.0; },
                "(0, inf)");
    take_double("adam_beta1", cfg.train.adam_beta1,
                [](double v) { return v >= 0.0 && v < 1.0; }, "[0, 1)");
    take_double("adam_beta2", cfg.train.adam_beta2,
                [](double v) { return v >= 0.0 && v < 1.0; }, "[0, 1)");
    take_double("adam_epsilon", cfg.train.adam_epsilon, [](double v) { return v > 0.0; },
                "(0, inf)");
    take_double("validation_fraction", cfg.train.validation_fraction,
                [](double v) { return v >= 0.0 && v < 0.5; }, "[0, 0.5)");
    take_unsigned<std::uint64_t>("seed", cfg.seed, 0);

    if (auto it = globals_.find("output_dir"); it != globals_.end()) {
      if (it->second.value.empty()) {
        error(it->second.line, "output_dir must not be empty");
      } else {
        cfg.output_dir = resolve(it->second.value);
      }
    } else {
      cfg.output_dir = resolve(cfg.output_dir);
    }
    if (auto it = globals_.find("record_wall_clock"); it != globals_.end()) {
      if (it->second.value == "true") {
        cfg.record_wall_clock = true;
      } else if (it->second.value == "false") {
        cfg.record_wall_clock = false;
      } else {
        error(it->second.line, "record_wall_clock must be true or false");
      }
    }
  }

  void apply_assets(ExperimentConfig& cfg) {
    for (const auto& symbol : asset_order_) {
      const auto& keys = assets_[symbol];
      const std::size_t header_line = asset_lines_[symbol];
      for (const auto& [key, entry] : keys) {
        if (key != "path") {
          error(entry.line, "unknown key `" + key + "` in [asset." + symbol + "]");
        }
      }
      auto it = keys.find("path");
      if (it == keys.end() || it->second.value.empty()) {
        error(header_line, "asset `" + symbol + "` has no dataset path");
        continue;
      }
      cfg.assets.push_back({symbol, resolve(it->second.value), header_line});
    }
    if (asset_order_.empty()) error(0, "at least one [asset.<SYMBOL>] section is required");
  }

  std::string resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir_.empty()) p = std::filesystem::path(base_dir_) / p;
    return p.lexically_normal().string();
  }

  std::string base_dir_;
  std::map<std::string, Entry> globals_;
  std::map<std::string, std::map<std::string, Entry>> assets_;
  std::map<std::string, std::size_t> asset_lines_;
  std::vector<std::string> asset_order_;
  std::vector<ConfigDiagnostic> diags_;
  bool skip_section_ = false;
};

}  // namespace

ConfigError::ConfigError(std::vector<ConfigDiagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

const AssetEntry* ExperimentConfig::find_asset(std::string_view symbol) const noexcept {
  for (const auto& a : assets) {
    if (a.symbol == symbol) return &a;
  }
  return nullptr;
}

ExperimentConfig validate_config(std::string_view config_text, const std::string& base_dir) {
  return Parser(config_text, base_dir).build();
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "cannot open config file " + path}});
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path().string();
  return validate_config(buf.str(), base);
}

std::string render_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "price_column = " << config.price_column << "\n"
      << "lookback = " << config.lookback << "\n"
      << "train_fraction = " << format_double(config.split.train_fraction) << "\n";
  out << "architectures = ";
  for (std::size_t i = 0; i < config.architectures.size(); ++i) {
    out << (i ? ", " : "") << to_string(config.architectures[i].cell_kind);
  }
  out << "\n";
  if (!config.architectures.empty()) {
    out << "layers = " << config.architectures.front().layers << "\n"
        << "hidden_units = " << config.architectures.front().hidden_units << "\n";
  }
  out << "batch_size = " << config.train.batch_size << "\n"
      << "epochs = " << config.train.epochs << "\n"
      << "learning_rate = " << format_double(config.train.learning_rate) << "\n"
      << "adam_beta1 = " << format_double(config.train.adam_beta1) << "\n"
      << "adam_beta2 = " << format_double(config.train.adam_beta2) << "\n"
      << "adam_epsilon = " << format_double(config.train.adam_epsilon) << "\n"
      << "validation_fraction = " << format_double(config.train.validation_fraction) << "\n"
      << "seed = " << config.seed << "\n"
      << "output_dir = " << config.output_dir << "\n"
      << "record_wall_clock = " << (config.record_wall_clock ? "true" : "false") << "\n";
  for (const auto& a : config.assets) {
    out << "\n[asset." << a.symbol << "]\npath = " << a.path << "\n";
  }
  return out.str();
}

}  // namespace rnnfc
