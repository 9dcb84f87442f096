#ifndef CURVSTAB_ERRORS_HPP
#define CURVSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvstab {

struct InvalidSpectralData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedCombination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotCriticalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingFactorData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotIntegrable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureNotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepSelectionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitIllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration errors carry the path of the offending field.
struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string field_path, const std::string& msg)
      : std::runtime_error(field_path + ": " + msg), path(std::move(field_path)) {}
};

} // namespace curvstab

#endif
