#include "gradfem/error.hpp"

namespace gradfem {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FractureNotRepresentable: return "FractureNotRepresentable";
    case ErrorKind::SingularPointNotAVertex: return "SingularPointNotAVertex";
    case ErrorKind::TwoSingularPointsInOneTriangle: return "TwoSingularPointsInOneTriangle";
    case ErrorKind::BrokenLineage: return "BrokenLineage";
    case ErrorKind::InvalidMesh: return "InvalidMesh";
    case ErrorKind::KappaOutOfRange: return "KappaOutOfRange";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::DegenerateElement: return "DegenerateElement";
    case ErrorKind::Breakdown: return "Breakdown";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NonpositiveDifference: return "NonpositiveDifference";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::Io: return "Io";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gradfem
