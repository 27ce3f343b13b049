#pragma once

#include <string>
#include <string_view>

#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

// JSON checkpoint document:
//   {
//     "format": "rnnfc.checkpoint", "version": 1,
//     "arch": {"cell_kind", "layers", "hidden_units", "input_dim", "output_dim"},
//     "seed": <uint64>,
//     "tensors": [{"name": "layers.0.dir.0.input_weights", "shape": [rows, cols],
//                  "values": [... row-major ...]}, ...,
//                 {"name": "dense.weights", ...}, {"name": "dense.bias", "shape": []}]
//   }
// Tensors appear in the canonical flat order used by flatten().
std::string checkpoint_to_string(const ModelParams& model);
ModelParams checkpoint_from_string(std::string_view text);

void save_checkpoint(const ModelParams& model, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace rnnfc
