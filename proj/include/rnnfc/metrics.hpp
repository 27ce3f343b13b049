#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rnnfc/ingest.hpp"
#include "rnnfc/preprocess.hpp"
#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

// All four throw ContractViolation on unequal or empty inputs.
double mse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
double rmse(std::span<const double> actual, std::span<const double> predicted);
// Percent: (100 / n) * sum |A - P| / A, signed A in the denominator. Throws
// UndefinedMetric if any actual value is zero.
double mape(std::span<const double> actual, std::span<const double> predicted);

struct MetricSet {
  double mse = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<double> mape;  // absent when undefined (a zero actual)
};

MetricSet compute_metrics(std::span<const double> actual, std::span<const double> predicted);

struct PredictionPair {
  Date date;
  double actual = 0.0;     // price scale
  double predicted = 0.0;  // price scale
};

struct EvalReport {
  std::size_t n = 0;
  MetricSet normalized;
  MetricSet price;
  std::vector<PredictionPair> pairs;
};

// Metrics at both scales from normalized actual/predicted series.
EvalReport evaluate_predictions(std::span<const double> normalized_actual,
                                std::span<const double> normalized_predicted,
                                const ScalerParams& scaler, std::span<const Date> dates);

// Runs the model over every test window. `dates[i]` is the date of target i.
EvalReport evaluate(const ModelParams& model, const SequenceBatch& test_windows,
                    const ScalerParams& scaler, std::span<const Date> dates);

}  // namespace rnnfc
