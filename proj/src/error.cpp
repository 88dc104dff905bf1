#include "thetalab/error.hpp"

namespace thetalab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::RadiusExceeded: return "RadiusExceeded";
    case ErrorKind::NotInLattice: return "NotInLattice";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotDiagonal: return "NotDiagonal";
    case ErrorKind::BlockNotSplit: return "BlockNotSplit";
    case ErrorKind::NotDivisorChain: return "NotDivisorChain";
    case ErrorKind::NoRootFound: return "NoRootFound";
    case ErrorKind::AllCoordinatesVanish: return "AllCoordinatesVanish";
    case ErrorKind::GradientVanishes: return "GradientVanishes";
    case ErrorKind::CensusUnstable: return "CensusUnstable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PoleAtZ: return "PoleAtZ";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::BadColumnList: return "BadColumnList";
    case ErrorKind::AlignmentFailed: return "AlignmentFailed";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::CertificateFailed: return "CertificateFailed";
  }
  return "Unknown";
}

}  // namespace thetalab
