#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradfem {

enum class ErrorKind {
  FractureNotRepresentable,
  SingularPointNotAVertex,
  TwoSingularPointsInOneTriangle,
  BrokenLineage,
  InvalidMesh,
  KappaOutOfRange,
  UnsupportedDegree,
  DegenerateElement,
  Breakdown,
  DimensionMismatch,
  NotNested,
  NonpositiveDifference,
  ConfigParse,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind; what() starts with the kind name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gradfem
