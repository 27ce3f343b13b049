#include <algorithm>
#include <numeric>
#include <string>

#include "cells.hpp"
#include "rnnfc/errors.hpp"
#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

std::vector<MatrixXd> split_steps(const MatrixXd& windows) {
  std::vector<MatrixXd> steps(static_cast<std::size_t>(windows.rows()));
  for (Index t = 0; t < windows.rows(); ++t) steps[static_cast<std::size_t>(t)] = windows.row(t);
  return steps;
}

// Per-step outputs of a non-final layer: direction outputs stacked vertically.
std::vector<MatrixXd> layer_outputs(const LayerTape& layer, Index hidden) {
  const auto steps = layer.directions.front().hidden.size();
  std::vector<MatrixXd> out(steps);
  const auto dirs = static_cast<Index>(layer.directions.size());
  for (std::size_t t = 0; t < steps; ++t) {
    out[t].resize(hidden * dirs, layer.directions.front().hidden[t].cols());
    for (Index d = 0; d < dirs; ++d) {
      out[t].middleRows(d * hidden, hidden) = layer.directions[static_cast<std::size_t>(d)].hidden[t];
    }
  }
  return out;
}

// Final state of each direction: the last position for the forward pass, the
// first position for the reversed pass.
MatrixXd final_features(const LayerTape& layer, Index hidden) {
  const auto& fwd = layer.directions.front().hidden;
  const auto dirs = static_cast<Index>(layer.directions.size());
  MatrixXd f(hidden * dirs, fwd.back().cols());
  f.topRows(hidden) = fwd.back();
  if (dirs == 2) f.bottomRows(hidden) = layer.directions[1].hidden.front();
  return f;
}

void validate_model(const ModelParams& model) {
  model.arch.validate();
  check_shapes(model.arch, model);
  if (model.arch.input_dim != 1) {
    throw ContractViolation("window-based forward requires a univariate model (input_dim 1)");
  }
}

MatrixXd window_matrix(std::span<const double> window) {
  if (window.empty()) throw ContractViolation("forward on an empty window");
  return Eigen::Map<const Eigen::VectorXd>(window.data(), static_cast<Index>(window.size()));
}

}  // namespace

BatchForwardResult forward_batch(const ModelParams& model, const MatrixXd& windows) {
  validate_model(model);
  if (windows.rows() == 0 || windows.cols() == 0) {
    throw ContractViolation("forward on an empty window batch");
  }
  const ArchSpec& arch = model.arch;
  const auto hidden = static_cast<Index>(arch.hidden_units);

  BatchForwardResult result;
  Tape& tape = result.tape;
  tape.arch = arch;
  tape.parameter_count = parameter_count(model);
  tape.batch = windows.cols();
  tape.steps = windows.rows();
  tape.layers.resize(arch.layers);

  for (std::size_t l = 0; l < arch.layers; ++l) {
    LayerTape& layer = tape.layers[l];
    layer.inputs = l == 0 ? split_steps(windows) : layer_outputs(tape.layers[l - 1], hidden);
    layer.directions.resize(arch.directions());
    for (std::size_t d = 0; d < arch.directions(); ++d) {
      detail::run_direction(arch.cell_kind, model.layers[l].directions[d], layer.inputs, d == 1,
                            layer.directions[d]);
    }
  }
  tape.features = final_features(tape.layers.back(), hidden);
  result.predictions = (model.dense_weights.transpose() * tape.features).transpose();
  result.predictions.array() += model.dense_bias;
  return result;
}

ForwardResult forward(const ModelParams& model, std::span<const double> window) {
  auto batch = forward_batch(model, window_matrix(window));
  return {batch.predictions[0], std::move(batch.tape)};
}

Eigen::VectorXd predict_batch(const ModelParams& model, const MatrixXd& windows) {
  return forward_batch(model, windows).predictions;
}

MatrixXd pack_windows(const std::vector<std::vector<double>>& windows,
                      std::span<const std::size_t> indices) {
  if (indices.empty()) throw ContractViolation("cannot pack an empty window list");
  const auto steps = windows.at(indices.front()).size();
  MatrixXd packed(static_cast<Index>(steps), static_cast<Index>(indices.size()));
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const auto& w = windows.at(indices[b]);
    if (w.size() != steps) throw ContractViolation("windows differ in length");
    packed.col(static_cast<Index>(b)) =
        Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Index>(steps));
  }
  return packed;
}

std::vector<double> predict_windows(const ModelParams& model,
                                    const std::vector<std::vector<double>>& windows,
                                    std::size_t chunk) {
  std::vector<double> out;
  out.reserve(windows.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < windows.size(); start += chunk) {
    const std::size_t stop = std::min(windows.size(), start + std::max<std::size_t>(chunk, 1));
    idx.resize(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    const Eigen::VectorXd p = predict_batch(model, pack_windows(windows, idx));
    out.insert(out.end(), p.data(), p.data() + p.size());
  }
  return out;
}

double predict(const ModelParams& model, std::span<const double> window) {
  return forward(model, window).prediction;
}

ParamGrads backward(const ModelParams& model, const Tape& tape,
                    const Eigen::VectorXd& d_predictions) {
  validate_model(model);
  if (!(tape.arch == model.arch) || tape.parameter_count != parameter_count(model) ||
      tape.layers.size() != model.arch.layers) {
    throw ContractViolation("tape was not produced by this model");
  }
  if (d_predictions.size() != tape.batch) {
    throw ContractViolation("d_predictions length " + std::to_string(d_predictions.size()) +
                            " does not match batch " + std::to_string(tape.batch));
  }
  const ArchSpec& arch = model.arch;
  const auto hidden = static_cast<Index>(arch.hidden_units);
  const auto steps = static_cast<std::size_t>(tape.steps);

  ParamGrads grads = zero_grads(arch);
  grads.dense_weights.noalias() = tape.features * d_predictions;
  grads.dense_bias = d_predictions.sum();

  // Gradient w.r.t. the last layer's final states.
  const MatrixXd d_features = model.dense_weights * d_predictions.transpose();
  std::vector<std::vector<MatrixXd>> d_hidden(arch.directions());
  for (std::size_t d = 0; d < arch.directions(); ++d) {
    d_hidden[d].assign(steps, MatrixXd::Zero(hidden, tape.batch));
    const std::size_t final_pos = d == 0 ? steps - 1 : 0;
    d_hidden[d][final_pos] = d_features.middleRows(static_cast<Index>(d) * hidden, hidden);
  }

  for (std::size_t l = arch.layers; l-- > 0;) {
    const LayerTape& layer = tape.layers[l];
    std::vector<MatrixXd> d_inputs(steps);
    for (auto& m : d_inputs) m = MatrixXd::Zero(layer.inputs.front().rows(), tape.batch);
    for (std::size_t d = 0; d < arch.directions(); ++d) {
      detail::backprop_direction(arch.cell_kind, model.layers[l].directions[d], layer.inputs,
                                 d == 1, layer.directions[d], d_hidden[d],
                                 grads.layers[l].directions[d], d_inputs);
    }
    if (l == 0) break;
    for (std::size_t d = 0; d < arch.directions(); ++d) {
      for (std::size_t t = 0; t < steps; ++t) {
        d_hidden[d][t] = d_inputs[t].middleRows(static_cast<Index>(d) * hidden, hidden);
      }
    }
  }
  return grads;
}

ParamGrads backward(const ModelParams& model, const Tape& tape, double d_prediction) {
  return backward(model, tape, Eigen::VectorXd::Constant(1, d_prediction));
}

}  // namespace rnnfc
