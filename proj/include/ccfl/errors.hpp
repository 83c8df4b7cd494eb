#ifndef CCFL_ERRORS_HPP
#define CCFL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ccfl {

/// Malformed or invalid configuration. `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// The requested problem has no feasible point. `constraint()` names the
/// violated constraint ("CC constraint", "budget", "device power", ...).
class InfeasibleError : public std::runtime_error {
public:
  InfeasibleError(std::string constraint, const std::string& what)
      : std::runtime_error(constraint + ": " + what), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

private:
  std::string constraint_;
};

}  // namespace ccfl

#endif  // CCFL_ERRORS_HPP
