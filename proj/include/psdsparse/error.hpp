#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdsparse {

enum class ErrorKind {
  NonFinite,
  NoConvergence,
  DimensionMismatch,
  DomainError,
  Overflow,
  NotSymmetric,
  NotPSD,
  WeightsNotSimplex,
  NotIsotropic,
  NormBoundTooSmall,
  CenteringCertificateFailed,
  IsotropicTransformFailed,
  Disconnected,
  InvalidGraph,
  EmptyFamily,
  BoundViolation,
  NumericalDrift,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type. `what()` is a
// single line of the form "<Kind>: <detail>" so the CLI can print it as is.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace psdsparse
