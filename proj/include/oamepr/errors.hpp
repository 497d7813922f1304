#pragma once

#include <stdexcept>
#include <string>

namespace oamepr {

/// Argument outside the mathematical domain of a function (e.g. negative
/// Fresnel argument, non-positive Gamma parameter).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Intermediate result would overflow double precision.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// A parameter record failed validation. `field()` names the offending field.
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Numerical postcondition violated during a computation.
class ComputationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace oamepr
