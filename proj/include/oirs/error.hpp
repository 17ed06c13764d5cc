#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oirs {

enum class ErrorKind {
  InvalidArgument,
  DegenerateGeometry,
  ParallelNormals,
  EmptyAim,
  LayoutMismatch,
  SamplingError,
  Infeasible,
  InfeasibleRatio,
  TooLarge,
  OverlappingRegions,
  RegionOutOfWindow,
  OutOfWindow,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind is
/// stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Geometry failure tied to one array element (and optionally a target).
class GeometryError : public Error {
 public:
  GeometryError(ErrorKind kind, const std::string& what, int row = -1,
                int col = -1, int target = -1)
      : Error(kind, what), row_(row), col_(col), target_(target) {}

  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }
  int target() const noexcept { return target_; }

 private:
  int row_;
  int col_;
  int target_;
};

}  // namespace oirs
