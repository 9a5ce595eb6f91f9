#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ymtg {

/// Bad user input: mismatched grids, invalid exponents, malformed arguments.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Configuration problems: unknown keys, missing commands, unregistered representations.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: representation drift, singular matrices, corrupted spectra.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File I/O and checkpoint format failures.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iteration failed to converge; carries the residual history up to the failure.
struct nonconvergence_error : std::runtime_error {
  std::vector<double> history;
  nonconvergence_error(const std::string& what, std::vector<double> hist)
      : std::runtime_error(what), history(std::move(hist)) {}
};

/// Solution norm exceeded the blow-up ceiling; carries the last valid time.
struct blowup_error : std::runtime_error {
  double last_time;
  blowup_error(const std::string& what, double t)
      : std::runtime_error(what), last_time(t) {}
};

}  // namespace ymtg
