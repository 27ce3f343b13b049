#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnnfc {

// Input file is structurally wrong (header, columns).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input rows violate a data invariant (duplicate dates, bad prices, gaps that
// cannot be filled, too little data).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a function's preconditions (shape mismatch, empty input).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A metric is not defined for the given inputs (e.g. MAPE with a zero actual).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Adam received a non-finite gradient entry.
class PoisonedUpdate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training loss became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what)
      : std::runtime_error(what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

// One config problem, tied to the line that caused it (0 = whole file).
struct ConfigDiagnostic {
  std::size_t line = 0;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigDiagnostic> diagnostics);

  const std::vector<ConfigDiagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::vector<ConfigDiagnostic> diagnostics_;
};

}  // namespace rnnfc
