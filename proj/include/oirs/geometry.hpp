#pragma once

#include <array>
#include <cmath>

namespace oirs::geom {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Direction vector with Euclidean norm 1. Construction normalizes; a zero or
/// non-finite input throws InvalidArgument.
class UnitVec3 {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit UnitVec3(const Vec3& v);
  /// Accepts a vector already of unit length (within kTolerance) and
  /// renormalizes it; throws if it is not.
  static UnitVec3 checked(const Vec3& v);

  const Vec3& vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x; }
  double y() const noexcept { return v_.y; }
  double z() const noexcept { return v_.z; }
  operator const Vec3&() const noexcept { return v_; }

 private:
  Vec3 v_;
};

class RotationMatrix {
 public:
  using Rows = std::array<std::array<double, 3>, 3>;

  RotationMatrix() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}
  explicit RotationMatrix(const Rows& m) : m_(m) {}

  static RotationMatrix identity() { return {}; }

  double operator()(int r, int c) const { return m_[r][c]; }
  const Rows& rows() const noexcept { return m_; }

  Vec3 apply(const Vec3& v) const;
  RotationMatrix transposed() const;
  RotationMatrix operator*(const RotationMatrix& o) const;
  double determinant() const;
  /// Largest entry-wise deviation of RᵀR from the identity.
  double orthonormality_error() const;

 private:
  Rows m_;
};

/// Mirror reflection of direction v about unit normal n: v − 2(v·n)n.
Vec3 reflect(const Vec3& v, const UnitVec3& n);

/// Normal a mirror at `element_center` needs so that light travelling along
/// `incident_dir` is sent toward `target`: the normalized bisector
/// (r − p)/(2|r − p|) − s/(2|s|). Throws DegenerateGeometry when the bisector
/// vanishes (target straight down-beam of the element).
UnitVec3 deflected_normal(const Vec3& element_center, const Vec3& incident_dir,
                          const Vec3& target);

/// Tilt between two normals as used by the cosine power-loss model:
/// arccos|h·h′| ∈ [0, π/2].
double deflection_angle(const UnitVec3& initial_normal, const UnitVec3& new_normal);

/// Signed rotation angle arccos(h·h′) ∈ [0, π]; pairs with rotation_axis so
/// that rotation_matrix(axis, angle) maps h onto h′.
double rotation_angle(const UnitVec3& initial_normal, const UnitVec3& new_normal);

/// Normalized h × h′. Throws ParallelNormals when |h × h′| < 1e−12.
UnitVec3 rotation_axis(const UnitVec3& initial_normal, const UnitVec3& new_normal);

/// Rodrigues form E·cosθ + (1 − cosθ)·l lᵀ + sinθ·[l]ₓ.
RotationMatrix rotation_matrix(const UnitVec3& axis, double angle);

/// Rotation taking h onto h′ by the shortest arc. Parallel normals give the
/// identity; antiparallel normals turn by π about an axis orthogonal to h.
RotationMatrix align_rotation(const UnitVec3& initial_normal, const UnitVec3& new_normal);

/// Angle in radians between two nonzero vectors, accurate near 0 and π.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace oirs::geom
