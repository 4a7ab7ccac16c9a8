#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Parameters fall outside the regime where a formula or approximation holds
/// (overdamped Rabi splitting, non-dispersive qubit/resonator detuning).
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComparisonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : std::runtime_error(format(what, line, field)), line(line), field(std::move(field)) {}

  int line;
  std::string field;

 private:
  static std::string format(const std::string& what, int line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "'" + field + "': ";
    return out + what;
  }
};

}  // namespace cqed
