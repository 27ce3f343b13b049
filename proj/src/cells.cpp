#include "cells.hpp"

#include <algorithm>
#include <numeric>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

MatrixXd sigmoid(const MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

MatrixXd affine(const CellParams& p, const MatrixXd& x, const MatrixXd& h_prev) {
  MatrixXd z = p.input_weights * x;
  z.noalias() += p.recurrent_weights * h_prev;
  z.colwise() += p.bias;
  return z;
}

// One LSTM step over a batch. `gates` receives [i; f; candidate; o].
void lstm_forward_step(const CellParams& p, const MatrixXd& x, const MatrixXd& h_prev,
                       const MatrixXd& c_prev, MatrixXd& gates, MatrixXd& c, MatrixXd& h) {
  const Index hd = p.hidden();
  gates = affine(p, x, h_prev);
  gates.topRows(2 * hd) = sigmoid(gates.topRows(2 * hd));
  gates.middleRows(2 * hd, hd) = gates.middleRows(2 * hd, hd).array().tanh().matrix();
  gates.bottomRows(hd) = sigmoid(gates.bottomRows(hd));

  const auto i = gates.topRows(hd).array();
  const auto f = gates.middleRows(hd, hd).array();
  const auto g = gates.middleRows(2 * hd, hd).array();
  const auto o = gates.bottomRows(hd).array();
  c = (f * c_prev.array() + i * g).matrix();
  h = (o * c.array().tanh()).matrix();
}

// One GRU step. `gates` receives [u; r; candidate].
void gru_forward_step(const CellParams& p, const MatrixXd& x, const MatrixXd& h_prev,
                      MatrixXd& gates, MatrixXd& h) {
  const Index hd = p.hidden();
  gates.resize(3 * hd, x.cols());
  MatrixXd z_ur = p.input_weights.topRows(2 * hd) * x;
  z_ur.noalias() += p.recurrent_weights.topRows(2 * hd) * h_prev;
  z_ur.colwise() += p.bias.head(2 * hd);
  gates.topRows(2 * hd) = sigmoid(z_ur);

  const MatrixXd reset_h = (gates.middleRows(hd, hd).array() * h_prev.array()).matrix();
  MatrixXd z_n = p.input_weights.bottomRows(hd) * x;
  z_n.noalias() += p.recurrent_weights.bottomRows(hd) * reset_h;
  z_n.colwise() += p.bias.tail(hd);
  gates.bottomRows(hd) = z_n.array().tanh().matrix();

  const auto u = gates.topRows(hd).array();
  const auto n = gates.bottomRows(hd).array();
  h = ((1.0 - u) * h_prev.array() + u * n).matrix();
}

void check_step_shapes(const CellParams& p, Index gates, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& h) {
  if (p.input_weights.rows() != gates * p.hidden() || p.bias.size() != gates * p.hidden() ||
      p.recurrent_weights.rows() != gates * p.hidden()) {
    throw ContractViolation("cell parameters do not match the cell kind");
  }
  if (x.size() != p.input_dim()) throw ContractViolation("input vector has wrong length");
  if (h.size() != p.hidden()) throw ContractViolation("hidden vector has wrong length");
}

std::vector<Index> processing_order(Index steps, bool reversed) {
  std::vector<Index> order(static_cast<std::size_t>(steps));
  std::iota(order.begin(), order.end(), Index{0});
  if (reversed) std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

CellState lstm_step(const CellParams& params, const Eigen::VectorXd& x,
                    const CellState& state) {
  check_step_shapes(params, 4, x, state.h);
  if (state.c.size() != params.hidden()) throw ContractViolation("cell vector has wrong length");
  MatrixXd gates;
  MatrixXd c;
  MatrixXd h;
  lstm_forward_step(params, x, state.h, state.c, gates, c, h);
  return {h.col(0), c.col(0)};
}

Eigen::VectorXd gru_step(const CellParams& params, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& h_prev) {
  check_step_shapes(params, 3, x, h_prev);
  MatrixXd gates;
  MatrixXd h;
  gru_forward_step(params, x, h_prev, gates, h);
  return h.col(0);
}

namespace detail {

void run_direction(CellKind kind, const CellParams& params,
                   const std::vector<MatrixXd>& inputs, bool reversed, DirectionTape& tape) {
  const auto steps = static_cast<Index>(inputs.size());
  const Index batch = inputs.empty() ? 0 : inputs.front().cols();
  const Index hd = params.hidden();
  const bool lstm = kind != CellKind::GRU;

  tape.gates.assign(inputs.size(), MatrixXd());
  tape.hidden.assign(inputs.size(), MatrixXd());
  tape.cells.assign(lstm ? inputs.size() : 0, MatrixXd());

  const MatrixXd zero = MatrixXd::Zero(hd, batch);
  const MatrixXd* h_prev = &zero;
  const MatrixXd* c_prev = &zero;
  for (Index t : processing_order(steps, reversed)) {
    const auto s = static_cast<std::size_t>(t);
    if (lstm) {
      lstm_forward_step(params, inputs[s], *h_prev, *c_prev, tape.gates[s], tape.cells[s],
                        tape.hidden[s]);
      c_prev = &tape.cells[s];
    } else {
      gru_forward_step(params, inputs[s], *h_prev, tape.gates[s], tape.hidden[s]);
    }
    h_prev = &tape.hidden[s];
  }
}

void backprop_direction(CellKind kind, const CellParams& params,
                        const std::vector<MatrixXd>& inputs, bool reversed,
                        const DirectionTape& tape, const std::vector<MatrixXd>& d_hidden,
                        CellParams& grads, std::vector<MatrixXd>& d_inputs) {
  const auto steps = static_cast<Index>(inputs.size());
  const Index batch = inputs.empty() ? 0 : inputs.front().cols();
  const Index hd = params.hidden();
  const auto order = processing_order(steps, reversed);
  const MatrixXd zero = MatrixXd::Zero(hd, batch);

  MatrixXd dh_next = zero;
  MatrixXd dc_next = zero;
  MatrixXd dz;
  for (Index k = steps - 1; k >= 0; --k) {
    const auto s = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
    const bool first = k == 0;
    const auto prev = first ? s : static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)]);
    const MatrixXd& h_prev = first ? zero : tape.hidden[prev];
    const auto& gates = tape.gates[s];
    const MatrixXd dh = d_hidden[s] + dh_next;

    if (kind != CellKind::GRU) {
      const MatrixXd& c_prev = first ? zero : tape.cells[prev];
      const auto i = gates.topRows(hd).array();
      const auto f = gates.middleRows(hd, hd).array();
      const auto g = gates.middleRows(2 * hd, hd).array();
      const auto o = gates.bottomRows(hd).array();
      const Eigen::ArrayXXd tanh_c = tape.cells[s].array().tanh();

      const Eigen::ArrayXXd dc = dc_next.array() + dh.array() * o * (1.0 - tanh_c.square());
      dz.resize(4 * hd, batch);
      dz.topRows(hd) = (dc * g * i * (1.0 - i)).matrix();
      dz.middleRows(hd, hd) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
      dz.middleRows(2 * hd, hd) = (dc * i * (1.0 - g.square())).matrix();
      dz.bottomRows(hd) = (dh.array() * tanh_c * o * (1.0 - o)).matrix();

      grads.input_weights.noalias() += dz * inputs[s].transpose();
      if (!first) grads.recurrent_weights.noalias() += dz * h_prev.transpose();
      grads.bias += dz.rowwise().sum();
      d_inputs[s].noalias() += params.input_weights.transpose() * dz;
      dh_next.noalias() = params.recurrent_weights.transpose() * dz;
      dc_next = (dc * f).matrix();
    } else {
      const auto u = gates.topRows(hd).array();
      const auto r = gates.middleRows(hd, hd).array();
      const auto n = gates.bottomRows(hd).array();

      dz.resize(3 * hd, batch);
      dz.bottomRows(hd) = (dh.array() * u * (1.0 - n.square())).matrix();
      const MatrixXd d_reset_h = params.recurrent_weights.bottomRows(hd).transpose() *
                                 dz.bottomRows(hd);
      dz.topRows(hd) = (dh.array() * (n - h_prev.array()) * u * (1.0 - u)).matrix();
      dz.middleRows(hd, hd) = (d_reset_h.array() * h_prev.array() * r * (1.0 - r)).matrix();

      grads.input_weights.noalias() += dz * inputs[s].transpose();
      if (!first) {
        grads.recurrent_weights.topRows(2 * hd).noalias() +=
            dz.topRows(2 * hd) * h_prev.transpose();
        const MatrixXd reset_h = (r * h_prev.array()).matrix();
        grads.recurrent_weights.bottomRows(hd).noalias() +=
            dz.bottomRows(hd) * reset_h.transpose();
      }
      grads.bias += dz.rowwise().sum();
      d_inputs[s].noalias() += params.input_weights.transpose() * dz;

      dh_next = (dh.array() * (1.0 - u) + d_reset_h.array() * r).matrix();
      dh_next.noalias() += params.recurrent_weights.topRows(2 * hd).transpose() *
                           dz.topRows(2 * hd);
    }
  }
}

}  // namespace detail

}  // namespace rnnfc
