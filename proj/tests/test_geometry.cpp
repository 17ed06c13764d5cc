#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oirs/error.hpp"
#include "oirs/geometry.hpp"

using namespace oirs;
using namespace oirs::geom;

namespace {

// Reflection law computed directly, independent of the library's reflect().
Vec3 mirror(const Vec3& v, const Vec3& n) {
  const double k = 2.0 * (v.x * n.x + v.y * n.y + v.z * n.z);
  return {v.x - k * n.x, v.y - k * n.y, v.z - k * n.z};
}

double angle(const Vec3& a, const Vec3& b) {
  const Vec3 c = cross(a, b);
  return std::atan2(norm(c), dot(a, b));
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  return v / norm(v);
}

void check_close(const Vec3& a, const Vec3& b, double tol) {
  CHECK(std::abs(a.x - b.x) <= tol);
  CHECK(std::abs(a.y - b.y) <= tol);
  CHECK(std::abs(a.z - b.z) <= tol);
}

}  // namespace

TEST_CASE("unit vectors normalize and validate") {
  const UnitVec3 u({3.0, 0.0, 4.0});
  CHECK(u.x() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(u.z() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(UnitVec3({0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(UnitVec3::checked({1.0, 1.0, 0.0}), Error);
  CHECK_NOTHROW(UnitVec3::checked({1.0 + 1e-10, 0.0, 0.0}));
}

TEST_CASE("deflected normal: retroreflection and 45 degree fold") {
  check_close(deflected_normal({0, 0, 0}, {0, 0, -1}, {0, 0, 5}).vec(), {0, 0, 1}, 1e-15);
  const double h = std::sqrt(0.5);
  check_close(deflected_normal({0, 0, 0}, {0, 0, -1}, {5, 0, 0}).vec(), {h, 0, h}, 1e-15);
}

TEST_CASE("deflected normal degenerate when the target lies down-beam") {
  try {
    deflected_normal({0, 0, 0}, {0, 0, -1}, {0, 0, -3});
    FAIL("expected DegenerateGeometry");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGeometry);
  }
}

TEST_CASE("deflected normal satisfies the reflection law on random cases") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p{pos(rng), pos(rng), pos(rng)};
    const Vec3 r{pos(rng), pos(rng), pos(rng) + 3.0};
    const Vec3 s = random_unit(rng) * (0.5 + std::abs(pos(rng)));
    if (angle(s, r - p) < 1e-3) continue;
    const UnitVec3 n = deflected_normal(p, s, r);
    REQUIRE(angle(mirror(s, n.vec()), r - p) < 1e-9);
  }
}

TEST_CASE("deflection angle uses the absolute dot product") {
  const UnitVec3 h({0, 0, 1});
  CHECK(deflection_angle(h, h) == 0.0);
  CHECK(deflection_angle(h, UnitVec3({1, 0, 1})) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(deflection_angle(h, UnitVec3({1, 0, -1})) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const UnitVec3 a(random_unit(rng)), b(random_unit(rng));
    const double expected = std::acos(std::min(1.0, std::abs(dot(a.vec(), b.vec()))));
    CHECK(std::abs(deflection_angle(a, b) - expected) <= 1e-12);
    CHECK(deflection_angle(a, b) <= std::numbers::pi / 2);
  }
}

TEST_CASE("rotation axis is the normalized cross product") {
  check_close(rotation_axis(UnitVec3({0, 0, 1}), UnitVec3({1, 0, 0})).vec(), {0, 1, 0}, 1e-15);
  try {
    rotation_axis(UnitVec3({0, 0, 1}), UnitVec3({0, 0, 1}));
    FAIL("expected ParallelNormals");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParallelNormals);
  }
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const UnitVec3 a(random_unit(rng)), b(random_unit(rng));
    const UnitVec3 l = rotation_axis(a, b);
    CHECK(std::abs(dot(l.vec(), a.vec())) <= 1e-12);
    CHECK(std::abs(dot(l.vec(), b.vec())) <= 1e-12);
  }
}

TEST_CASE("rotation matrix examples") {
  const auto id = rotation_matrix(UnitVec3({0.3, -0.2, 0.9}), 0.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(id(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));
  check_close(rotation_matrix(UnitVec3({0, 0, 1}), std::numbers::pi / 2).apply({1, 0, 0}), {0, 1, 0}, 1e-15);
  const UnitVec3 h({0, 0, 1}), hp({1, 0, 1});
  const auto R = rotation_matrix(rotation_axis(h, hp), rotation_angle(h, hp));
  check_close(R.apply(h.vec()), hp.vec(), 1e-10);
}

TEST_CASE("rotation composition maps h onto h' for all orientations") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10000; ++i) {
    const UnitVec3 a(random_unit(rng)), b(random_unit(rng));
    const auto R = rotation_matrix(rotation_axis(a, b), rotation_angle(a, b));
    check_close(R.apply(a.vec()), b.vec(), 1e-10);
    CHECK(R.orthonormality_error() <= 1e-10);
    CHECK(std::abs(R.determinant() - 1.0) <= 1e-10);
  }
}

TEST_CASE("align rotation handles parallel and antiparallel normals") {
  const UnitVec3 h({0.2, 0.3, 0.9});
  const auto I = align_rotation(h, h);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(I(r, c) == (r == c ? 1.0 : 0.0));
  const UnitVec3 minus(-h.vec());
  const auto F = align_rotation(h, minus);
  check_close(F.apply(h.vec()), minus.vec(), 1e-12);
  CHECK(std::abs(F.determinant() - 1.0) <= 1e-12);
}

TEST_CASE("reflect and angle_between") {
  const UnitVec3 n({0, 0, 1});
  check_close(reflect({1, 0, -1}, n), {1, 0, 1}, 1e-15);
  CHECK(angle_between({1, 0, 0}, {0, 1, 0}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(angle_between({1, 0, 0}, {1, 1e-12, 0}) == doctest::Approx(1e-12).epsilon(1e-6));
}
