#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thetalab {

enum class ErrorKind {
  NonPositiveDefinite,
  RadiusExceeded,
  NotInLattice,
  InvalidArgument,
  NotDiagonal,
  BlockNotSplit,
  NotDivisorChain,
  NoRootFound,
  AllCoordinatesVanish,
  GradientVanishes,
  CensusUnstable,
  DimensionMismatch,
  PoleAtZ,
  CalibrationFailed,
  BadColumnList,
  AlignmentFailed,
  ZeroVector,
  ConfigInvalid,
  IoError,
  CertificateFailed,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace thetalab
