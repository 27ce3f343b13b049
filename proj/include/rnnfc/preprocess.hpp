#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rnnfc {

// MinMax scaling onto [0, 1], fitted on one segment and reused for others.
class ScalerParams {
 public:
  // Throws DataError when max == min (including single-element input).
  static ScalerParams fit(std::span<const double> train_values);
  // Throws ContractViolation unless max > min.
  static ScalerParams from_bounds(double min_value, double max_value);

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }

  double transform(double v) const noexcept { return (v - min_) / (max_ - min_); }
  double inverse(double z) const noexcept { return z * (max_ - min_) + min_; }

 private:
  ScalerParams(double lo, double hi) : min_(lo), max_(hi) {}

  double min_;
  double max_;
};

ScalerParams fit_scaler(std::span<const double> train_values);
std::vector<double> transform(const ScalerParams& scaler, std::span<const double> values);
std::vector<double> inverse_transform(const ScalerParams& scaler,
                                      std::span<const double> normalized);

// Lookback windows paired with the value immediately after each window.
struct SequenceBatch {
  std::size_t lookback = 0;
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  // Index of each target in the source sequence.
  std::vector<std::size_t> origin_indices;

  std::size_t size() const noexcept { return targets.size(); }
  bool empty() const noexcept { return targets.empty(); }

  // Windows [from, to) as a new batch.
  SequenceBatch slice(std::size_t from, std::size_t to) const;
};

// Window k covers values[k .. k+W-1], target values[k+W]. Throws DataError when
// values.size() <= lookback and ContractViolation when lookback == 0.
SequenceBatch make_windows(std::span<const double> values, std::size_t lookback);

// Windows whose targets are exactly the test values: the last `lookback`
// training values are prepended so the first test value is predictable.
// origin_indices index into `test`.
SequenceBatch make_test_windows(std::span<const double> train, std::span<const double> test,
                                std::size_t lookback);

}  // namespace rnnfc
