#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rnnfc/errors.hpp"
#include "rnnfc/rnn_core.hpp"

namespace rnnfc {

double gradient_relative_error(double analytic, double numeric) noexcept {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult compare_gradients(const ModelParams& model, std::span<const double> window,
                                  double target, double epsilon, const ParamGrads& analytic) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw ContractViolation("grad_check epsilon must lie in [1e-7, 1e-3]");
  }
  check_shapes(model.arch, analytic);
  const Eigen::VectorXd base = flatten(model);
  const Eigen::VectorXd grad = flatten(analytic);

  ModelParams probe = model;
  const auto predict_at = [&](const Eigen::VectorXd& flat) {
    unflatten({flat.data(), static_cast<std::size_t>(flat.size())}, probe);
    return predict(probe, window);
  };

  GradCheckResult result;
  Eigen::VectorXd shifted = base;
  for (Eigen::Index k = 0; k < base.size(); ++k) {
    shifted[k] = base[k] + epsilon;
    const double up = predict_at(shifted);
    shifted[k] = base[k] - epsilon;
    const double down = predict_at(shifted);
    shifted[k] = base[k];

    // (up - t)^2 - (down - t)^2 factored to avoid cancellation between the squares.
    const double numeric = (up - down) / (2.0 * epsilon) * (up + down - 2.0 * target);
    const double err = gradient_relative_error(grad[k], numeric);
    if (k == 0 || err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_index = static_cast<std::size_t>(k);
      result.worst_analytic = grad[k];
      result.worst_numeric = numeric;
    }
  }
  return result;
}

double grad_check(const ModelParams& model, std::span<const double> window, double target,
                  double epsilon) {
  const auto fwd = forward(model, window);
  const ParamGrads grads = backward(model, fwd.tape, 2.0 * (fwd.prediction - target));
  return compare_gradients(model, window, target, epsilon, grads).max_relative_error;
}

GradCheckSummary gradcheck_trials(CellKind kind, const GradCheckTrials& spec,
                                  const GradCheckVisitor& visit) {
  std::mt19937_64 rng(spec.seed ^ (static_cast<std::uint64_t>(kind) + 1) * 0x9E3779B97F4A7C15ULL);
  const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  GradCheckSummary summary;
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    ArchSpec arch;
    arch.cell_kind = kind;
    arch.layers = spec.layers;
    arch.hidden_units = spec.hidden_units;
    const ModelParams model = init_params(arch, rng());
    std::vector<double> window(spec.lookback);
    for (auto& v : window) v = unit();
    const double target = unit();
    const auto fwd = forward(model, window);
    const ParamGrads grads = backward(model, fwd.tape, 2.0 * (fwd.prediction - target));
    const auto r = compare_gradients(model, window, target, spec.epsilon, grads);
    if (visit) visit(model, window, target, grads);
    summary.trials += 1;
    if (summary.trials == 1 || r.max_relative_error > summary.worst.max_relative_error) {
      summary.worst = r;
      summary.worst_trial = trial;
    }
  }
  return summary;
}

}  // namespace rnnfc
