#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rnnfc/errors.hpp"
#include "rnnfc/training.hpp"

namespace rnnfc {
namespace {

ArchSpec tiny(CellKind kind) {
  ArchSpec a;
  a.cell_kind = kind;
  a.hidden_units = 3;
  return a;
}

SequenceBatch sine_windows(std::size_t n, std::size_t lookback) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = 0.5 + 0.4 * std::sin(2 * std::numbers::pi * static_cast<double>(i) / 25.0);
  }
  return make_windows(v, lookback);
}

TrainConfig quick_config(std::size_t epochs = 3) {
  TrainConfig c;
  c.batch_size = 8;
  c.epochs = epochs;
  c.learning_rate = 0.01;
  c.shuffle_seed = 99;
  return c;
}

TEST(MseLoss, Examples) {
  const std::vector<double> a{1, 2, 4};
  EXPECT_EQ(mse_loss(a, a), 0.0);
  EXPECT_NEAR(mse_loss(std::vector<double>{0.5, 2, 5}, a), 0.416667, 1e-6);
  EXPECT_EQ(mse_loss(std::vector<double>{0}, std::vector<double>{1}), 1.0);
  EXPECT_THROW(mse_loss(std::vector<double>{0}, a), ContractViolation);
}

TEST(TrainConfig, ValidateRanges) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = TrainConfig{};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = TrainConfig{};
  c.validation_fraction = 0.5;
  EXPECT_THROW(c.validate(), ContractViolation);
}

TEST(AdamStep, ZeroGradientIsFixedPoint) {
  const auto model = init_params(tiny(CellKind::LSTM), 4);
  const auto state = OptimizerState::zeros_like(model);
  const auto r = adam_step(model, zero_grads(model.arch), state, TrainConfig{});
  EXPECT_EQ(flatten(r.params), flatten(model));
  EXPECT_EQ(r.state.first_moment, state.first_moment);
  EXPECT_EQ(r.state.second_moment, state.second_moment);
  EXPECT_EQ(r.state.step, 1u);
}

TEST(AdamStep, FirstStepMovesByLearningRate) {
  const auto model = init_params(tiny(CellKind::GRU), 4);
  ParamGrads g = zero_grads(model.arch);
  Eigen::VectorXd flat = flatten(g);
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    flat(i) = (i % 2 ? -1.0 : 1.0) * std::pow(10.0, static_cast<double>(i % 7) - 3.0);
  }
  unflatten({flat.data(), static_cast<std::size_t>(flat.size())}, g);
  TrainConfig c;
  c.learning_rate = 0.001;
  const auto r = adam_step(model, g, OptimizerState::zeros_like(model), c);
  const Eigen::VectorXd delta = flatten(r.params) - flatten(model);
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    // m_hat = g and v_hat = g^2 after one bias-corrected step.
    const double expected = -c.learning_rate * flat(i) / (std::abs(flat(i)) + c.adam_epsilon);
    EXPECT_NEAR(delta(i), expected, 1e-15);
    EXPECT_NEAR(std::abs(delta(i)), c.learning_rate, 1e-7);
  }
}

TEST(AdamStep, DeterministicAndPoisonDetected) {
  const auto model = init_params(tiny(CellKind::BiLSTM), 4);
  ParamGrads g = zero_grads(model.arch);
  g.dense_bias = 0.3;
  g.dense_weights.setConstant(-0.2);
  const auto s = OptimizerState::zeros_like(model);
  const auto a = adam_step(model, g, s, TrainConfig{});
  const auto b = adam_step(model, g, s, TrainConfig{});
  EXPECT_EQ(flatten(a.params), flatten(b.params));
  EXPECT_EQ(a.state.second_moment, b.state.second_moment);
  g.dense_bias = std::nan("");
  EXPECT_THROW(adam_step(model, g, s, TrainConfig{}), PoisonedUpdate);
}

TEST(Train, ReportShapeAndWindowCounts) {
  const auto batch = sine_windows(120, 10);
  const auto r = train(init_params(tiny(CellKind::LSTM), 1), batch, quick_config(4));
  EXPECT_EQ(r.report.validation_windows, validation_count(batch.size(), 0.1));
  EXPECT_EQ(r.report.validation_windows, 11u);
  EXPECT_EQ(r.report.train_windows, batch.size() - 11);
  ASSERT_EQ(r.report.epochs.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = r.report.epochs[i];
    EXPECT_EQ(e.epoch, i + 1);
    EXPECT_EQ(e.windows_seen, r.report.train_windows);
    EXPECT_TRUE(std::isfinite(e.train_loss));
    EXPECT_GE(e.train_loss, 0.0);
    ASSERT_TRUE(e.val_loss);
    EXPECT_GE(*e.val_loss, 0.0);
  }
}

TEST(Train, NoValidationTailLeavesValLossEmpty) {
  auto c = quick_config(1);
  c.validation_fraction = 0.0;
  const auto r = train(init_params(tiny(CellKind::GRU), 1), sine_windows(60, 5), c);
  EXPECT_EQ(r.report.validation_windows, 0u);
  EXPECT_FALSE(r.report.epochs[0].val_loss);
}

TEST(Train, DeterministicTrajectories) {
  for (CellKind k : {CellKind::LSTM, CellKind::GRU, CellKind::BiLSTM}) {
    const auto batch = sine_windows(90, 8);
    const auto model = init_params(tiny(k), 5);
    const auto a = train(model, batch, quick_config());
    const auto b = train(model, batch, quick_config());
    EXPECT_EQ(flatten(a.model), flatten(b.model));
    for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
      EXPECT_EQ(a.report.epochs[i].train_loss, b.report.epochs[i].train_loss);
      EXPECT_EQ(a.report.epochs[i].val_loss, b.report.epochs[i].val_loss);
    }
  }
}

TEST(Train, ShuffleSeedChangesTrajectory) {
  const auto batch = sine_windows(90, 8);
  const auto model = init_params(tiny(CellKind::LSTM), 5);
  auto c = quick_config();
  const auto a = train(model, batch, c);
  c.shuffle_seed += 1;
  const auto b = train(model, batch, c);
  EXPECT_NE(flatten(a.model), flatten(b.model));
}

TEST(Train, ValidationTailNeverInfluencesParameters) {
  auto batch = sine_windows(100, 6);
  const auto model = init_params(tiny(CellKind::GRU), 6);
  const auto base = train(model, batch, quick_config());
  const std::size_t n_fit = base.report.train_windows;
  for (std::size_t i = n_fit; i < batch.size(); ++i) {
    batch.targets[i] += 10.0;
    for (auto& v : batch.inputs[i]) v = -v;
  }
  const auto perturbed = train(model, batch, quick_config());
  EXPECT_EQ(flatten(perturbed.model), flatten(base.model));
  EXPECT_NE(perturbed.report.epochs.back().val_loss, base.report.epochs.back().val_loss);
}

TEST(Train, NonFiniteLossIsDivergenceWithEpoch) {
  auto batch = sine_windows(50, 5);
  batch.targets[0] = 1e300;
  try {
    train(init_params(tiny(CellKind::LSTM), 1), batch, quick_config());
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.epoch(), 1u);
  }
}

TEST(Train, ConvergesOnSine) {
  auto c = quick_config(60);
  c.batch_size = 16;
  const auto r = train(init_params(tiny(CellKind::LSTM), 2), sine_windows(200, 10), c);
  EXPECT_LT(r.report.epochs.back().train_loss * 10.0, r.report.epochs.front().train_loss);
}

}  // namespace
}  // namespace rnnfc
