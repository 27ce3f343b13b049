#pragma once

#include <vector>

#include "rnnfc/rnn_core.hpp"

namespace rnnfc::detail {

// Runs one direction of one layer over `inputs` (one input_dim x B matrix per
// step) from zero initial state, recording activations in `tape`.
void run_direction(CellKind kind, const CellParams& params,
                   const std::vector<Eigen::MatrixXd>& inputs, bool reversed,
                   DirectionTape& tape);

// Reverse-mode pass through one direction. `d_hidden[t]` is the loss gradient
// flowing into hidden[t] from outside the recurrence. Accumulates parameter
// gradients into `grads` and input gradients into `d_inputs`.
void backprop_direction(CellKind kind, const CellParams& params,
                        const std::vector<Eigen::MatrixXd>& inputs, bool reversed,
                        const DirectionTape& tape,
                        const std::vector<Eigen::MatrixXd>& d_hidden, CellParams& grads,
                        std::vector<Eigen::MatrixXd>& d_inputs);

}  // namespace rnnfc::detail
