#pragma once

#include <stdexcept>
#include <string>

namespace cirfilter {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A model or prior parameter was non-positive (or not finite).
class NonPositiveParameter : public Error {
  public:
    explicit NonPositiveParameter(std::string field_name)
        : Error("parameter '" + field_name + "' must be positive and finite"),
          field(std::move(field_name)) {}

    std::string field;
};

/// Simulation grid request could not be honoured (step <= 0 or step >= horizon).
class InvalidGrid : public Error {
  public:
    using Error::Error;
};

/// Attempt to move a filter state backwards in time, or to register a jump
/// that does not strictly follow the previous one.
class TimeRegression : public Error {
  public:
    using Error::Error;
};

/// Internal filter invariant broken (normalising constant or rate not positive).
class DegenerateState : public Error {
  public:
    using Error::Error;
};

/// Transform argument outside the domain of definition (e.g. s >= rate).
class OutOfDomain : public Error {
  public:
    using Error::Error;
};

/// Jump-time input is not strictly increasing / positive.
class NonMonotoneJumps : public Error {
  public:
    using Error::Error;
};

/// Adaptive integrator could not meet its local tolerance.
class StepFailure : public Error {
  public:
    using Error::Error;
};

/// All particle weights underflowed.
class Degeneracy : public Error {
  public:
    using Error::Error;
};

/// Configuration file violates the schema.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace cirfilter
