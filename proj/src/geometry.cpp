#include "oirs/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "oirs/error.hpp"

namespace oirs::geom {

namespace {

constexpr double kParallelTolerance = 1e-12;

}  // namespace

UnitVec3::UnitVec3(const Vec3& v) {
  const double n = norm(v);
  if (!is_finite(v) || !(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "unit vector from zero or non-finite input");
  }
  v_ = v / n;
}

UnitVec3 UnitVec3::checked(const Vec3& v) {
  if (std::abs(norm(v) - 1.0) > kTolerance) {
    throw Error(ErrorKind::InvalidArgument,
                "vector is not unit length (|v| = " + std::to_string(norm(v)) + ")");
  }
  return UnitVec3(v);
}

Vec3 RotationMatrix::apply(const Vec3& v) const {
  return {m_[0][0] * v.x + m_[0][1] * v.y + m_[0][2] * v.z,
          m_[1][0] * v.x + m_[1][1] * v.y + m_[1][2] * v.z,
          m_[2][0] * v.x + m_[2][1] * v.y + m_[2][2] * v.z};
}

RotationMatrix RotationMatrix::transposed() const {
  Rows t{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t[r][c] = m_[c][r];
  return RotationMatrix(t);
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
  Rows p{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      p[r][c] = m_[r][0] * o.m_[0][c] + m_[r][1] * o.m_[1][c] + m_[r][2] * o.m_[2][c];
  return RotationMatrix(p);
}

double RotationMatrix::determinant() const {
  return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
         m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
         m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

double RotationMatrix::orthonormality_error() const {
  const RotationMatrix g = transposed() * *this;
  double worst = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(g(r, c) - (r == c ? 1.0 : 0.0)));
  return worst;
}

Vec3 reflect(const Vec3& v, const UnitVec3& n) {
  return v - 2.0 * dot(v, n.vec()) * n.vec();
}

UnitVec3 deflected_normal(const Vec3& element_center, const Vec3& incident_dir,
                          const Vec3& target) {
  const double l2 = norm(incident_dir);
  if (!(l2 > 0.0)) {
    throw GeometryError(ErrorKind::InvalidArgument, "incident direction is zero");
  }
  const Vec3 to_target = target - element_center;
  const double l1 = norm(to_target);
  if (!(l1 > 0.0)) {
    throw GeometryError(ErrorKind::DegenerateGeometry, "target coincides with element center");
  }
  const Vec3 bisector = to_target / (2.0 * l1) - incident_dir / (2.0 * l2);
  // |bisector| = sin(half the turn); below this the outgoing ray is the
  // incident ray itself and no mirror orientation produces it.
  if (norm(bisector) < kParallelTolerance) {
    throw GeometryError(ErrorKind::DegenerateGeometry,
                        "target lies straight down-beam of the element");
  }
  return UnitVec3(bisector);
}

double deflection_angle(const UnitVec3& initial_normal, const UnitVec3& new_normal) {
  const double c = std::abs(dot(initial_normal.vec(), new_normal.vec()));
  return std::acos(std::min(1.0, c));
}

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form keeps full precision at both ends of [0, π].
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

double rotation_angle(const UnitVec3& initial_normal, const UnitVec3& new_normal) {
  return angle_between(initial_normal.vec(), new_normal.vec());
}

UnitVec3 rotation_axis(const UnitVec3& initial_normal, const UnitVec3& new_normal) {
  const Vec3 axis = cross(initial_normal.vec(), new_normal.vec());
  if (norm(axis) < kParallelTolerance) {
    throw GeometryError(ErrorKind::ParallelNormals, "normals are parallel; no unique rotation axis");
  }
  return UnitVec3(axis);
}

RotationMatrix rotation_matrix(const UnitVec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis.x(), y = axis.y(), z = axis.z();
  return RotationMatrix(RotationMatrix::Rows{{
      {c + t * x * x, t * x * y - s * z, t * x * z + s * y},
      {t * y * x + s * z, c + t * y * y, t * y * z - s * x},
      {t * z * x - s * y, t * z * y + s * x, c + t * z * z},
  }});
}

RotationMatrix align_rotation(const UnitVec3& initial_normal, const UnitVec3& new_normal) {
  const Vec3& h = initial_normal.vec();
  const Vec3 axis = cross(h, new_normal.vec());
  if (norm(axis) >= kParallelTolerance) {
    return rotation_matrix(UnitVec3(axis), rotation_angle(initial_normal, new_normal));
  }
  if (dot(h, new_normal.vec()) > 0.0) return RotationMatrix::identity();
  // Antiparallel: any axis orthogonal to h works; pick the one least aligned
  // with the coordinate axis closest to h.
  const Vec3 helper = std::abs(h.x) <= std::abs(h.y) && std::abs(h.x) <= std::abs(h.z)
                          ? Vec3{1, 0, 0}
                          : (std::abs(h.y) <= std::abs(h.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  return rotation_matrix(UnitVec3(cross(h, helper)), std::numbers::pi);
}

}  // namespace oirs::geom
