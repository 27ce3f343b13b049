#include "rnnfc/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "rnnfc/errors.hpp"

namespace rnnfc {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ContractViolation("batch_size must be >= 1");
  if (epochs < 1) throw ContractViolation("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ContractViolation("learning_rate must be positive");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ContractViolation("adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ContractViolation("adam_epsilon must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 0.5)) {
    throw ContractViolation("validation_fraction must lie in [0, 0.5)");
  }
}

OptimizerState OptimizerState::zeros_like(const ParamTensors& params) {
  const auto n = static_cast<Eigen::Index>(parameter_count(params));
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ContractViolation("mse_loss needs equal, nonempty lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = predictions[i] - targets[i];
    sum += r * r;
  }
  return sum / static_cast<double>(predictions.size());
}

void adam_update(ModelParams& params, const ParamGrads& grads, OptimizerState& state,
                 const TrainConfig& config) {
  check_shapes(params.arch, grads);
  const Eigen::VectorXd g = flatten(grads);
  if (state.first_moment.size() != g.size() || state.second_moment.size() != g.size()) {
    throw ContractViolation("optimizer state does not match the parameters");
  }
  if (!g.allFinite()) throw PoisonedUpdate("non-finite gradient entry");

  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const auto t = static_cast<double>(state.step + 1);
  state.step += 1;
  state.first_moment = b1 * state.first_moment + (1.0 - b1) * g;
  state.second_moment = b2 * state.second_moment + (1.0 - b2) * g.cwiseAbs2();

  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  Eigen::VectorXd p = flatten(params);
  p.array() -= config.learning_rate * (state.first_moment.array() / c1) /
               ((state.second_moment.array() / c2).sqrt() + config.adam_epsilon);
  unflatten({p.data(), static_cast<std::size_t>(p.size())}, params);
}

AdamResult adam_step(const ModelParams& params, const ParamGrads& grads,
                     const OptimizerState& state, const TrainConfig& config) {
  AdamResult out{params, state};
  adam_update(out.params, grads, out.state, config);
  return out;
}

std::size_t validation_count(std::size_t windows, double validation_fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(windows) * validation_fraction));
}

TrainResult train(const ModelParams& model, const SequenceBatch& train_batch,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  check_shapes(model.arch, model, /*check_finite=*/true);
  const std::size_t n_val = validation_count(train_batch.size(), config.validation_fraction);
  const std::size_t n_fit = train_batch.size() - n_val;
  if (n_fit == 0) throw ContractViolation("no training windows left after the validation carve-out");

  TrainResult result{model, {}};
  TrainReport& report = result.report;
  report.config = config;
  report.train_windows = n_fit;
  report.validation_windows = n_val;

  std::vector<std::vector<double>> val_inputs(train_batch.inputs.begin() + static_cast<std::ptrdiff_t>(n_fit),
                                              train_batch.inputs.end());
  const std::span<const double> val_targets(train_batch.targets.data() + n_fit, n_val);

  OptimizerState state = OptimizerState::zeros_like(model);
  std::mt19937_64 rng(config.shuffle_seed);
  std::vector<std::size_t> order(n_fit);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < n_fit; start += config.batch_size) {
      const std::size_t stop = std::min(n_fit, start + config.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      const auto fwd = forward_batch(result.model, pack_windows(train_batch.inputs, idx));

      Eigen::VectorXd residual(fwd.predictions.size());
      for (Eigen::Index b = 0; b < residual.size(); ++b) {
        residual[b] = fwd.predictions[b] - train_batch.targets[idx[static_cast<std::size_t>(b)]];
      }
      const auto count = static_cast<double>(idx.size());
      const double batch_loss = residual.squaredNorm() / count;
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError(epoch, "training loss became non-finite in epoch " +
                                         std::to_string(epoch));
      }
      const ParamGrads grads = backward(result.model, fwd.tape, (2.0 / count) * residual);
      try {
        adam_update(result.model, grads, state, config);
      } catch (const PoisonedUpdate& e) {
        throw DivergenceError(epoch, "poisoned update in epoch " + std::to_string(epoch) +
                                         ": " + e.what());
      }
      loss_sum += batch_loss;
      batches += 1;
      seen += idx.size();
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(batches);
    record.windows_seen = seen;
    if (n_val > 0) {
      const auto preds = predict_windows(result.model, val_inputs);
      record.val_loss = mse_loss(preds, val_targets);
      if (!std::isfinite(*record.val_loss)) {
        throw DivergenceError(epoch, "validation loss became non-finite in epoch " +
                                         std::to_string(epoch));
      }
    }
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  return result;
}

}  // namespace rnnfc
