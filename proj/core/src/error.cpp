#include "potlab/error.hpp"

namespace potlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::InvalidVertex: return "InvalidVertex";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::AsymmetricGenerators: return "AsymmetricGenerators";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::RadiusExceedsTrust: return "RadiusExceedsTrust";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::PoleOutsideDomain: return "PoleOutsideDomain";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::InsufficientProfile: return "InsufficientProfile";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::EquivalenceViolation: return "EquivalenceViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace potlab
