#ifndef LIBROT_ERRORS_HPP
#define LIBROT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace librot {

/// Invalid geometry or material parameters.
struct InvalidShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// |sin beta| fell below the tolerance where the Euler-angle map is invertible.
struct GimbalSingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// State diverged during integration; `time` is the failure instant (s).
struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& what, double time_s)
      : std::runtime_error(what), time(time_s) {}
  double time;
};

/// Energy balance has no finite steady state (zero damping).
struct NoSteadyStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested target cannot be reached by any temperature.
struct UnattainableTargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thermal-state truncation did not converge; raise n_max.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace librot

#endif  // LIBROT_ERRORS_HPP
