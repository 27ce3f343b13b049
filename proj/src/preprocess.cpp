#include "rnnfc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnnfc/errors.hpp"

namespace rnnfc {

ScalerParams ScalerParams::fit(std::span<const double> train_values) {
  if (train_values.empty()) throw ContractViolation("cannot fit scaler on empty data");
  for (double v : train_values) {
    if (!std::isfinite(v)) throw ContractViolation("cannot fit scaler on non-finite data");
  }
  const auto [lo, hi] = std::minmax_element(train_values.begin(), train_values.end());
  if (!(*hi > *lo)) {
    throw DataError("degenerate scale: all training values equal " + std::to_string(*lo));
  }
  return ScalerParams(*lo, *hi);
}

ScalerParams ScalerParams::from_bounds(double min_value, double max_value) {
  if (!(std::isfinite(min_value) && std::isfinite(max_value) && max_value > min_value)) {
    throw ContractViolation("scaler bounds require finite max > min");
  }
  return ScalerParams(min_value, max_value);
}

ScalerParams fit_scaler(std::span<const double> train_values) {
  return ScalerParams::fit(train_values);
}

std::vector<double> transform(const ScalerParams& scaler, std::span<const double> values) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double v) { return scaler.transform(v); });
  return out;
}

std::vector<double> inverse_transform(const ScalerParams& scaler,
                                      std::span<const double> normalized) {
  std::vector<double> out(normalized.size());
  std::transform(normalized.begin(), normalized.end(), out.begin(),
                 [&](double z) { return scaler.inverse(z); });
  return out;
}

SequenceBatch SequenceBatch::slice(std::size_t from, std::size_t to) const {
  if (from > to || to > size()) throw ContractViolation("batch slice out of range");
  SequenceBatch out;
  out.lookback = lookback;
  out.inputs.assign(inputs.begin() + from, inputs.begin() + to);
  out.targets.assign(targets.begin() + from, targets.begin() + to);
  out.origin_indices.assign(origin_indices.begin() + from, origin_indices.begin() + to);
  return out;
}

SequenceBatch make_windows(std::span<const double> values, std::size_t lookback) {
  if (lookback == 0) throw ContractViolation("lookback must be at least 1");
  if (values.size() <= lookback) {
    throw DataError("insufficient data: " + std::to_string(values.size()) +
                    " values for lookback " + std::to_string(lookback));
  }
  SequenceBatch batch;
  batch.lookback = lookback;
  const std::size_t count = values.size() - lookback;
  batch.inputs.reserve(count);
  batch.targets.reserve(count);
  batch.origin_indices.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    batch.inputs.emplace_back(values.begin() + k, values.begin() + k + lookback);
    batch.targets.push_back(values[k + lookback]);
    batch.origin_indices.push_back(k + lookback);
  }
  return batch;
}

SequenceBatch make_test_windows(std::span<const double> train, std::span<const double> test,
                                std::size_t lookback) {
  if (lookback == 0) throw ContractViolation("lookback must be at least 1");
  if (train.size() < lookback) {
    throw DataError("training segment shorter than the lookback window");
  }
  if (test.empty()) throw DataError("empty test segment");
  std::vector<double> joined(train.end() - static_cast<std::ptrdiff_t>(lookback), train.end());
  joined.insert(joined.end(), test.begin(), test.end());
  SequenceBatch batch = make_windows(joined, lookback);
  for (auto& idx : batch.origin_indices) idx -= lookback;
  return batch;
}

}  // namespace rnnfc
