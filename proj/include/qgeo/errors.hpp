#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

// Input outside the region where a formula or method is defined.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Division by (near) zero in a closed-form expression.
struct SingularityError : DomainError {
  using DomainError::DomainError;
};

// Real square root of a negative radicand in real mode.
struct BranchError : DomainError {
  using DomainError::DomainError;
};

// Geometric or analytic degeneracy: parallel planes, contour pinch.
struct DegeneracyError : std::runtime_error {
  DegeneracyError(const std::string& what, double estimate = 0.0)
      : std::runtime_error(what), estimate(estimate) {}
  double estimate;
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical integration or series did not reach the requested accuracy.
struct AccuracyError : std::runtime_error {
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved(achieved) {}
  double achieved;
};

}  // namespace qgeo
