#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnnfc/preprocess.hpp"
#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t shuffle_seed = 0;
  // Chronological tail of the training windows held out for validation.
  double validation_fraction = 0.1;

  // Throws ContractViolation if any invariant fails.
  void validate() const;
};

// Adam moments, flat in the order of flatten().
struct OptimizerState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::uint64_t step = 0;

  static OptimizerState zeros_like(const ParamTensors& params);
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> val_loss;  // absent when there is no validation tail
  double seconds = 0.0;
  std::size_t windows_seen = 0;
};

struct TrainReport {
  TrainConfig config;
  std::size_t train_windows = 0;
  std::size_t validation_windows = 0;
  std::vector<EpochRecord> epochs;
  std::string checkpoint;  // path of the saved model, set by the caller
};

struct TrainResult {
  ModelParams model;
  TrainReport report;
};

struct AdamResult {
  ModelParams params;
  OptimizerState state;
};

double mse_loss(std::span<const double> predictions, std::span<const double> targets);

// Bias-corrected Adam. Throws PoisonedUpdate on a non-finite gradient entry,
// leaving `params` and `state` untouched.
void adam_update(ModelParams& params, const ParamGrads& grads, OptimizerState& state,
                 const TrainConfig& config);
AdamResult adam_step(const ModelParams& params, const ParamGrads& grads,
                     const OptimizerState& state, const TrainConfig& config);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch training on the leading (1 - validation_fraction) share of
// `train_batch`; the trailing share only feeds the validation loss. Throws
// DivergenceError when a loss or gradient turns non-finite.
TrainResult train(const ModelParams& model, const SequenceBatch& train_batch,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

// Number of trailing windows held out for validation.
std::size_t validation_count(std::size_t windows, double validation_fraction);

}  // namespace rnnfc
