#include "rnnfc/metrics.hpp"

#include <cmath>

#include "rnnfc/errors.hpp"

namespace rnnfc {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw ContractViolation("metric inputs differ in length");
  }
  if (actual.empty()) throw ContractViolation("metric inputs are empty");
}

}  // namespace

double mse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    const double r = actual[t] - predicted[t];
    sum += r * r;
  }
  return sum / static_cast<double>(actual.size());
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) sum += std::abs(actual[t] - predicted[t]);
  return sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  return std::sqrt(mse(actual, predicted));
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double sum = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    if (actual[t] == 0.0) {
      throw UndefinedMetric("MAPE undefined: actual value at step " + std::to_string(t) +
                            " is zero");
    }
    sum += std::abs(actual[t] - predicted[t]) / actual[t];
  }
  return 100.0 / static_cast<double>(actual.size()) * sum;
}

MetricSet compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
  MetricSet m;
  m.mse = mse(actual, predicted);
  m.mae = mae(actual, predicted);
  m.rmse = std::sqrt(m.mse);
  try {
    m.mape = mape(actual, predicted);
  } catch (const UndefinedMetric&) {
    m.mape.reset();
  }
  return m;
}

EvalReport evaluate_predictions(std::span<const double> normalized_actual,
                                std::span<const double> normalized_predicted,
                                const ScalerParams& scaler, std::span<const Date> dates) {
  check_pair(normalized_actual, normalized_predicted);
  if (dates.size() != normalized_actual.size()) {
    throw ContractViolation("one date per evaluated step is required");
  }
  EvalReport report;
  report.n = normalized_actual.size();
  report.normalized = compute_metrics(normalized_actual, normalized_predicted);

  const auto actual = inverse_transform(scaler, normalized_actual);
  const auto predicted = inverse_transform(scaler, normalized_predicted);
  report.price = compute_metrics(actual, predicted);

  report.pairs.reserve(report.n);
  for (std::size_t t = 0; t < report.n; ++t) {
    report.pairs.push_back({dates[t], actual[t], predicted[t]});
  }
  return report;
}

EvalReport evaluate(const ModelParams& model, const SequenceBatch& test_windows,
                    const ScalerParams& scaler, std::span<const Date> dates) {
  if (test_windows.empty()) throw ContractViolation("evaluate on an empty test set");
  const auto predicted = predict_windows(model, test_windows.inputs);
  return evaluate_predictions(test_windows.targets, predicted, scaler, dates);
}

}  // namespace rnnfc
