#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace potlab {

enum class ErrorKind {
  NonPositiveWeight,
  Disconnected,
  DuplicateEdge,
  InvalidVertex,
  InvalidArgument,
  ParseError,
  SizeLimit,
  AsymmetricGenerators,
  NotAGroup,
  RadiusExceedsTrust,
  NotIncreasing,
  SingularSystem,
  PoleOutsideDomain,
  SolverDiverged,
  InsufficientProfile,
  HorizonTooShort,
  BallTooLarge,
  EquivalenceViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the ErrorKind tags so
/// that callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace potlab
