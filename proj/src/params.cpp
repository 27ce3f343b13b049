#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <string>

#include "rnnfc/errors.hpp"
#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Visits every tensor in canonical flat order. `on_matrix` receives matrices
// that must be read/written row-major; `on_vector` receives vectors; the dense
// bias is passed as a 1-element vector map.
template <typename Tensors, typename OnMatrix, typename OnVector, typename OnScalar>
void visit(Tensors& t, OnMatrix on_matrix, OnVector on_vector, OnScalar on_scalar) {
  for (auto& layer : t.layers) {
    for (auto& dir : layer.directions) {
      on_matrix(dir.input_weights);
      on_matrix(dir.recurrent_weights);
      on_vector(dir.bias);
    }
  }
  on_vector(t.dense_weights);
  on_scalar(t.dense_bias);
}

}  // namespace

std::string_view to_string(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::LSTM:
      return "lstm";
    case CellKind::GRU:
      return "gru";
    case CellKind::BiLSTM:
      return "bilstm";
  }
  return "unknown";
}

std::optional<CellKind> parse_cell_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "lstm") return CellKind::LSTM;
  if (lower == "gru") return CellKind::GRU;
  if (lower == "bilstm" || lower == "bi-lstm") return CellKind::BiLSTM;
  return std::nullopt;
}

void ArchSpec::validate() const {
  if (layers < 1) throw ContractViolation("arch: layers must be >= 1");
  if (hidden_units < 1) throw ContractViolation("arch: hidden_units must be >= 1");
  if (input_dim < 1) throw ContractViolation("arch: input_dim must be >= 1");
  if (output_dim != 1) throw ContractViolation("arch: output_dim must be 1");
}

ParamTensors zero_tensors(const ArchSpec& arch) {
  arch.validate();
  const auto h = static_cast<Eigen::Index>(arch.hidden_units);
  const auto rows = static_cast<Eigen::Index>(arch.gate_count()) * h;
  ParamTensors t;
  t.layers.resize(arch.layers);
  for (std::size_t l = 0; l < arch.layers; ++l) {
    const auto in = static_cast<Eigen::Index>(l == 0 ? arch.input_dim : arch.layer_output_dim());
    t.layers[l].directions.resize(arch.directions());
    for (auto& dir : t.layers[l].directions) {
      dir.input_weights = Eigen::MatrixXd::Zero(rows, in);
      dir.recurrent_weights = Eigen::MatrixXd::Zero(rows, h);
      dir.bias = Eigen::VectorXd::Zero(rows);
    }
  }
  t.dense_weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(arch.layer_output_dim()));
  t.dense_bias = 0.0;
  return t;
}

ParamGrads zero_grads(const ArchSpec& arch) {
  ParamGrads g;
  static_cast<ParamTensors&>(g) = zero_tensors(arch);
  return g;
}

void check_shapes(const ArchSpec& arch, const ParamTensors& tensors, bool check_finite) {
  const ParamTensors expected = zero_tensors(arch);
  const auto fail = [](const std::string& what) {
    throw ContractViolation("parameter shape mismatch: " + what);
  };
  if (tensors.layers.size() != expected.layers.size()) fail("layer count");
  for (std::size_t l = 0; l < expected.layers.size(); ++l) {
    const auto& got = tensors.layers[l].directions;
    const auto& want = expected.layers[l].directions;
    if (got.size() != want.size()) fail("direction count in layer " + std::to_string(l));
    for (std::size_t d = 0; d < want.size(); ++d) {
      const auto same = [](const auto& a, const auto& b) {
        return a.rows() == b.rows() && a.cols() == b.cols();
      };
      if (!same(got[d].input_weights, want[d].input_weights) ||
          !same(got[d].recurrent_weights, want[d].recurrent_weights) ||
          got[d].bias.size() != want[d].bias.size()) {
        fail("layer " + std::to_string(l) + " direction " + std::to_string(d));
      }
    }
  }
  if (tensors.dense_weights.size() != expected.dense_weights.size()) fail("dense weights");
  if (check_finite && !flatten(tensors).allFinite()) {
    throw ContractViolation("parameters contain non-finite entries");
  }
}

std::size_t parameter_count(const ParamTensors& tensors) noexcept {
  std::size_t n = 0;
  visit(
      tensors, [&](const Eigen::MatrixXd& m) { n += static_cast<std::size_t>(m.size()); },
      [&](const Eigen::VectorXd& v) { n += static_cast<std::size_t>(v.size()); },
      [&](double) { n += 1; });
  return n;
}

Eigen::VectorXd flatten(const ParamTensors& tensors) {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count(tensors)));
  Eigen::Index pos = 0;
  visit(
      tensors,
      [&](const Eigen::MatrixXd& m) {
        Eigen::Map<RowMajor>(flat.data() + pos, m.rows(), m.cols()) = m;
        pos += m.size();
      },
      [&](const Eigen::VectorXd& v) {
        flat.segment(pos, v.size()) = v;
        pos += v.size();
      },
      [&](double s) { flat[pos++] = s; });
  return flat;
}

void unflatten(std::span<const double> flat, ParamTensors& tensors) {
  if (flat.size() != parameter_count(tensors)) {
    throw ContractViolation("flat parameter length " + std::to_string(flat.size()) +
                            " does not match tensor layout");
  }
  std::size_t pos = 0;
  visit(
      tensors,
      [&](Eigen::MatrixXd& m) {
        m = Eigen::Map<const RowMajor>(flat.data() + pos, m.rows(), m.cols());
        pos += static_cast<std::size_t>(m.size());
      },
      [&](Eigen::VectorXd& v) {
        v = Eigen::Map<const Eigen::VectorXd>(flat.data() + pos, v.size());
        pos += static_cast<std::size_t>(v.size());
      },
      [&](double& s) { s = flat[pos++]; });
}

double glorot_bound(std::size_t fan_in, std::size_t fan_out) noexcept {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ModelParams init_params(const ArchSpec& arch, std::uint64_t seed) {
  ModelParams model;
  static_cast<ParamTensors&>(model) = zero_tensors(arch);
  model.arch = arch;
  model.seed = seed;

  std::mt19937_64 gen(seed);
  // 53 random mantissa bits -> [0, 1); avoids implementation-defined distributions.
  const auto fill = [&](Eigen::MatrixXd& m) {
    const double bound = glorot_bound(static_cast<std::size_t>(m.cols()),
                                      static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        m(r, c) = (2.0 * u - 1.0) * bound;
      }
    }
  };

  const auto h = static_cast<Eigen::Index>(arch.hidden_units);
  for (auto& layer : model.layers) {
    for (auto& dir : layer.directions) {
      fill(dir.input_weights);
      fill(dir.recurrent_weights);
      if (arch.cell_kind != CellKind::GRU) dir.bias.segment(h, h).setOnes();
    }
  }
  Eigen::MatrixXd dense(1, model.dense_weights.size());
  fill(dense);
  model.dense_weights = dense.row(0).transpose();
  return model;
}

}  // namespace rnnfc
