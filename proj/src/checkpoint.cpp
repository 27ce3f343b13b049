#include "rnnfc/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

using json = nlohmann::json;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::string_view kFormat = "rnnfc.checkpoint";

json matrix_entry(const std::string& name, const Eigen::MatrixXd& m) {
  const RowMajor rm = m;
  return {{"name", name},
          {"shape", {m.rows(), m.cols()}},
          {"values", std::vector<double>(rm.data(), rm.data() + rm.size())}};
}

json vector_entry(const std::string& name, const Eigen::VectorXd& v) {
  return {{"name", name},
          {"shape", {v.size()}},
          {"values", std::vector<double>(v.data(), v.data() + v.size())}};
}

const json& expect_entry(const json& tensors, std::size_t index, const std::string& name) {
  if (index >= tensors.size() || tensors[index].at("name") != name) {
    throw SchemaError("checkpoint: expected tensor `" + name + "` at position " +
                      std::to_string(index));
  }
  return tensors[index];
}

void read_matrix(const json& entry, Eigen::MatrixXd& m) {
  const auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
  const auto values = entry.at("values").get<std::vector<double>>();
  if (shape.size() != 2 || shape[0] != m.rows() || shape[1] != m.cols() ||
      static_cast<Eigen::Index>(values.size()) != m.size()) {
    throw SchemaError("checkpoint: tensor `" + entry.at("name").get<std::string>() +
                      "` has the wrong shape");
  }
  m = Eigen::Map<const RowMajor>(values.data(), m.rows(), m.cols());
}

void read_vector(const json& entry, Eigen::VectorXd& v) {
  const auto values = entry.at("values").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != v.size()) {
    throw SchemaError("checkpoint: tensor `" + entry.at("name").get<std::string>() +
                      "` has the wrong length");
  }
  v = Eigen::Map<const Eigen::VectorXd>(values.data(), v.size());
}

std::string tensor_prefix(std::size_t layer, std::size_t dir) {
  return "layers." + std::to_string(layer) + ".dir." + std::to_string(dir) + ".";
}

}  // namespace

std::string checkpoint_to_string(const ModelParams& model) {
  check_shapes(model.arch, model);
  json tensors = json::array();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    for (std::size_t d = 0; d < model.layers[l].directions.size(); ++d) {
      const auto& p = model.layers[l].directions[d];
      const auto prefix = tensor_prefix(l, d);
      tensors.push_back(matrix_entry(prefix + "input_weights", p.input_weights));
      tensors.push_back(matrix_entry(prefix + "recurrent_weights", p.recurrent_weights));
      tensors.push_back(vector_entry(prefix + "bias", p.bias));
    }
  }
  tensors.push_back(vector_entry("dense.weights", model.dense_weights));
  tensors.push_back({{"name", "dense.bias"},
                     {"shape", json::array()},
                     {"values", {model.dense_bias}}});

  const json doc = {{"format", kFormat},
                    {"version", 1},
                    {"arch",
                     {{"cell_kind", to_string(model.arch.cell_kind)},
                      {"layers", model.arch.layers},
                      {"hidden_units", model.arch.hidden_units},
                      {"input_dim", model.arch.input_dim},
                      {"output_dim", model.arch.output_dim}}},
                    {"seed", model.seed},
                    {"tensors", tensors}};
  return doc.dump(1) + "\n";
}

ModelParams checkpoint_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != kFormat || doc.at("version") != 1) {
      throw SchemaError("checkpoint: unsupported format or version");
    }
    const json& a = doc.at("arch");
    const auto kind = parse_cell_kind(a.at("cell_kind").get<std::string>());
    if (!kind) throw SchemaError("checkpoint: unknown cell_kind");
    ArchSpec arch;
    arch.cell_kind = *kind;
    arch.layers = a.at("layers").get<std::size_t>();
    arch.hidden_units = a.at("hidden_units").get<std::size_t>();
    arch.input_dim = a.at("input_dim").get<std::size_t>();
    arch.output_dim = a.at("output_dim").get<std::size_t>();
    arch.validate();

    ModelParams model;
    static_cast<ParamTensors&>(model) = zero_tensors(arch);
    model.arch = arch;
    model.seed = doc.at("seed").get<std::uint64_t>();

    const json& tensors = doc.at("tensors");
    std::size_t idx = 0;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      for (std::size_t d = 0; d < model.layers[l].directions.size(); ++d) {
        auto& p = model.layers[l].directions[d];
        const auto prefix = tensor_prefix(l, d);
        read_matrix(expect_entry(tensors, idx++, prefix + "input_weights"), p.input_weights);
        read_matrix(expect_entry(tensors, idx++, prefix + "recurrent_weights"),
                    p.recurrent_weights);
        read_vector(expect_entry(tensors, idx++, prefix + "bias"), p.bias);
      }
    }
    read_vector(expect_entry(tensors, idx++, "dense.weights"), model.dense_weights);
    const auto bias = expect_entry(tensors, idx++, "dense.bias").at("values").get<std::vector<double>>();
    if (bias.size() != 1) throw SchemaError("checkpoint: dense.bias must hold one value");
    model.dense_bias = bias[0];
    if (idx != tensors.size()) throw SchemaError("checkpoint: unexpected extra tensors");
    check_shapes(arch, model, /*check_finite=*/true);
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const ModelParams& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << checkpoint_to_string(model);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

}  // namespace rnnfc
