#include "oirs/error.hpp"

namespace oirs {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::ParallelNormals: return "ParallelNormals";
    case ErrorKind::EmptyAim: return "EmptyAim";
    case ErrorKind::LayoutMismatch: return "LayoutMismatch";
    case ErrorKind::SamplingError: return "SamplingError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InfeasibleRatio: return "InfeasibleRatio";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::OverlappingRegions: return "OverlappingRegions";
    case ErrorKind::RegionOutOfWindow: return "RegionOutOfWindow";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace oirs
