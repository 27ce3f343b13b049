#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rnnfc {

enum class CellKind { LSTM, GRU, BiLSTM };

std::string_view to_string(CellKind kind) noexcept;
// Accepts `lstm`, `gru`, `bilstm` / `bi-lstm`, case-insensitive.
std::optional<CellKind> parse_cell_kind(std::string_view text);

struct ArchSpec {
  CellKind cell_kind = CellKind::LSTM;
  std::size_t layers = 2;
  std::size_t hidden_units = 100;  // per direction
  std::size_t input_dim = 1;
  std::size_t output_dim = 1;

  // Throws ContractViolation if any invariant fails.
  void validate() const;

  std::size_t gate_count() const noexcept { return cell_kind == CellKind::GRU ? 3 : 4; }
  std::size_t directions() const noexcept { return cell_kind == CellKind::BiLSTM ? 2 : 1; }
  // Width of one layer's per-step output (and of the dense head input).
  std::size_t layer_output_dim() const noexcept { return hidden_units * directions(); }

  bool operator==(const ArchSpec&) const = default;
};

// Gate blocks are stacked row-wise. LSTM order: input, forget, candidate,
// output. GRU order: update, reset, candidate.
struct CellParams {
  Eigen::MatrixXd input_weights;      // (gates*H) x input
  Eigen::MatrixXd recurrent_weights;  // (gates*H) x H
  Eigen::VectorXd bias;               // gates*H

  Eigen::Index hidden() const noexcept { return recurrent_weights.cols(); }
  Eigen::Index input_dim() const noexcept { return input_weights.cols(); }
};

struct LayerParams {
  // One entry per direction; index 1 (if present) runs over the reversed sequence.
  std::vector<CellParams> directions;
};

// Every trainable tensor of the network. Shared layout of parameters and
// their gradients.
struct ParamTensors {
  std::vector<LayerParams> layers;
  Eigen::VectorXd dense_weights;
  double dense_bias = 0.0;
};

struct ModelParams : ParamTensors {
  ArchSpec arch;
  std::uint64_t seed = 0;
};

struct ParamGrads : ParamTensors {};

struct CellState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;  // empty for GRU
};

// Allocates zero-filled tensors shaped for `arch`.
ParamTensors zero_tensors(const ArchSpec& arch);
ParamGrads zero_grads(const ArchSpec& arch);

// Throws ContractViolation when `tensors` is not shaped for `arch` or holds
// non-finite entries (finite check only when `check_finite`).
void check_shapes(const ArchSpec& arch, const ParamTensors& tensors,
                  bool check_finite = false);

// Canonical flat order: per layer, per direction: input weights (row-major),
// recurrent weights (row-major), bias; then dense weights, dense bias.
std::size_t parameter_count(const ParamTensors& tensors) noexcept;
Eigen::VectorXd flatten(const ParamTensors& tensors);
void unflatten(std::span<const double> flat, ParamTensors& tensors);

// Glorot-uniform weights (fan_in = columns, fan_out = rows of each stacked
// matrix), zero biases, LSTM forget-gate bias 1. Deterministic in (arch, seed).
ModelParams init_params(const ArchSpec& arch, std::uint64_t seed);

double glorot_bound(std::size_t fan_in, std::size_t fan_out) noexcept;

CellState lstm_step(const CellParams& params, const Eigen::VectorXd& x,
                    const CellState& state);
Eigen::VectorXd gru_step(const CellParams& params, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& h_prev);

// Cached activations of one direction of one layer over a batch. Entry t holds
// the values at sequence position t (original order, also for the reversed
// direction).
struct DirectionTape {
  std::vector<Eigen::MatrixXd> gates;   // post-activation, (gates*H) x B
  std::vector<Eigen::MatrixXd> cells;   // LSTM only, H x B
  std::vector<Eigen::MatrixXd> hidden;  // H x B
};

struct LayerTape {
  std::vector<Eigen::MatrixXd> inputs;  // per step, input_dim x B
  std::vector<DirectionTape> directions;
};

// Everything backward() needs from a forward pass.
struct Tape {
  ArchSpec arch;
  std::size_t parameter_count = 0;
  Eigen::Index batch = 0;
  Eigen::Index steps = 0;
  std::vector<LayerTape> layers;
  Eigen::MatrixXd features;  // dense head input, F x B
};

struct ForwardResult {
  double prediction = 0.0;
  Tape tape;
};

struct BatchForwardResult {
  Eigen::VectorXd predictions;
  Tape tape;
};

// Stateless evaluation from zero initial states. Non-final layers emit every
// step; the final layer emits its last state per direction, which the dense
// head maps to one scalar. Windows are univariate (arch.input_dim == 1).
ForwardResult forward(const ModelParams& model, std::span<const double> window);

// Column b of `windows` (steps x B) is one window.
BatchForwardResult forward_batch(const ModelParams& model, const Eigen::MatrixXd& windows);

// Prediction only; the tape is discarded.
double predict(const ModelParams& model, std::span<const double> window);
Eigen::VectorXd predict_batch(const ModelParams& model, const Eigen::MatrixXd& windows);
// Predicts equal-length windows in chunks of `chunk` columns.
std::vector<double> predict_windows(const ModelParams& model,
                                    const std::vector<std::vector<double>>& windows,
                                    std::size_t chunk = 256);
// Packs the listed windows (all of one length) as columns of a steps x B matrix.
Eigen::MatrixXd pack_windows(const std::vector<std::vector<double>>& windows,
                             std::span<const std::size_t> indices);

// Gradient of sum_b d_predictions[b] * prediction_b w.r.t. every parameter.
ParamGrads backward(const ModelParams& model, const Tape& tape,
                    const Eigen::VectorXd& d_predictions);
ParamGrads backward(const ModelParams& model, const Tape& tape, double d_prediction);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// |a - n| / max(|a|, |n|, 1e-8).
double gradient_relative_error(double analytic, double numeric) noexcept;

// Compares `analytic` (gradient of the squared error (prediction - target)^2)
// against central differences parameter by parameter.
GradCheckResult compare_gradients(const ModelParams& model, std::span<const double> window,
                                  double target, double epsilon,
                                  const ParamGrads& analytic);

// Worst relative error between backward() and central differences of the MSE
// loss on one (window, target) pair. epsilon must lie in [1e-7, 1e-3].
double grad_check(const ModelParams& model, std::span<const double> window, double target,
                  double epsilon = 1e-5);

// Repeated grad_check over freshly initialized models with random windows and
// targets in [0, 1).
struct GradCheckTrials {
  std::size_t hidden_units = 4;
  std::size_t layers = 2;
  std::size_t lookback = 5;
  std::size_t trials = 20;
  double epsilon = 1e-5;
  std::uint64_t seed = 7;
};

struct GradCheckSummary {
  std::size_t trials = 0;
  std::size_t worst_trial = 0;
  GradCheckResult worst;
};

// Called once per trial with the model, window, target and analytic loss gradient.
using GradCheckVisitor = std::function<void(const ModelParams&, std::span<const double>, double,
                                            const ParamGrads&)>;

GradCheckSummary gradcheck_trials(CellKind kind, const GradCheckTrials& spec,
                                  const GradCheckVisitor& visit = {});

}  // namespace rnnfc
