#include <gtest/gtest.h>

#include "rnnfc/config.hpp"
#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

std::vector<ConfigDiagnostic> diagnostics_of(const std::string& text) {
  try {
    validate_config(text, "/base");
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<ConfigDiagnostic>& ds, std::size_t line, const std::string& word) {
  for (const auto& d : ds) {
    if (d.line == line && d.message.find(word) != std::string::npos) return true;
  }
  return false;
}

TEST(ValidateConfig, SingleAssetGetsDefaults) {
  const auto c = validate_config("[asset.BTC]\npath = data/BTC-USD.csv\n", "/base");
  ASSERT_EQ(c.assets.size(), 1u);
  EXPECT_EQ(c.assets[0].symbol, "BTC");
  EXPECT_EQ(c.assets[0].path, "/base/data/BTC-USD.csv");
  EXPECT_EQ(c.price_column, "Close");
  EXPECT_EQ(c.lookback, 60u);
  EXPECT_EQ(c.split.train_fraction, 0.8);
  EXPECT_EQ(c.train.batch_size, 32u);
  EXPECT_EQ(c.train.epochs, 100u);
  EXPECT_EQ(c.train.learning_rate, 0.001);
  EXPECT_EQ(c.train.validation_fraction, 0.1);
  ASSERT_EQ(c.architectures.size(), 3u);
  EXPECT_EQ(c.architectures[0].cell_kind, CellKind::LSTM);
  EXPECT_EQ(c.architectures[1].cell_kind, CellKind::GRU);
  EXPECT_EQ(c.architectures[2].cell_kind, CellKind::BiLSTM);
  for (const auto& a : c.architectures) {
    EXPECT_EQ(a.layers, 2u);
    EXPECT_EQ(a.hidden_units, 100u);
  }
  EXPECT_FALSE(c.record_wall_clock);
}

TEST(ValidateConfig, ExplicitValuesAndComments) {
  const auto c = validate_config(
      "# experiment\nlookback = 20\narchitectures = gru\nhidden_units = 8\nepochs=5\n"
      "seed = 7\n[asset.ETH]\n  # indented comment\npath = /abs/eth.csv\n",
      "/base");
  EXPECT_EQ(c.lookback, 20u);
  ASSERT_EQ(c.architectures.size(), 1u);
  EXPECT_EQ(c.architectures[0].hidden_units, 8u);
  EXPECT_EQ(c.train.epochs, 5u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.assets[0].path, "/abs/eth.csv");
}

TEST(ValidateConfig, LookbackZeroIsRangeDiagnostic) {
  const auto ds = diagnostics_of("lookback = 0\n[asset.BTC]\npath = a.csv\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_TRUE(mentions(ds, 1, "lookback"));
}

TEST(ValidateConfig, DuplicateAssetDiagnostic) {
  const auto ds = diagnostics_of("[asset.BTC]\npath = a.csv\n[asset.BTC]\npath = b.csv\n");
  EXPECT_TRUE(mentions(ds, 3, "duplicate asset"));
}

TEST(ValidateConfig, ItemizesEveryProblem) {
  const auto ds = diagnostics_of(
      "lookbak = 3\ntrain_fraction = 1.5\narchitectures = lstm, rnn\n"
      "[asset.BTC]\n[asset.ETH]\npath = e.csv\ncolour = red\n[weird]\n");
  EXPECT_TRUE(mentions(ds, 1, "unknown key"));
  EXPECT_TRUE(mentions(ds, 2, "train_fraction"));
  EXPECT_TRUE(mentions(ds, 3, "rnn"));
  EXPECT_TRUE(mentions(ds, 4, "no dataset path"));
  EXPECT_TRUE(mentions(ds, 7, "unknown key"));
  EXPECT_TRUE(mentions(ds, 8, "unknown section"));
}

TEST(ValidateConfig, NoAssetsIsDiagnostic) {
  const auto ds = diagnostics_of("lookback = 5\n");
  EXPECT_TRUE(mentions(ds, 0, "asset"));
}

TEST(ValidateConfig, DuplicateKeyDiagnostic) {
  const auto ds = diagnostics_of("epochs = 3\nepochs = 4\n[asset.A]\npath = a\n");
  EXPECT_TRUE(mentions(ds, 2, "duplicate key"));
}

TEST(RenderConfig, RoundTrips) {
  const auto c = validate_config(
      "lookback = 12\ntrain_fraction = 0.75\narchitectures = bilstm, lstm\nlayers = 1\n"
      "learning_rate = 0.003\nrecord_wall_clock = true\n[asset.BTC]\npath = /d/b.csv\n"
      "[asset.LTC]\npath = /d/l.csv\n",
      "/base");
  const auto again = validate_config(render_config(c), "/elsewhere");
  EXPECT_EQ(render_config(again), render_config(c));
  EXPECT_EQ(again.lookback, 12u);
  EXPECT_EQ(again.architectures, c.architectures);
  EXPECT_TRUE(again.record_wall_clock);
  EXPECT_EQ(again.assets[1].path, "/d/l.csv");
}

}  // namespace
}  // namespace rnnfc
