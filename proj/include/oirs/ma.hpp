#pragma once

// Micro-mirror array: geometry, aiming, incident power per element and the
// receiver-plane power density of the reflected beamlets.

#include <optional>
#include <vector>

#include "oirs/geometry.hpp"
#include "oirs/grid.hpp"

namespace oirs::ma {

/// Collimated Gaussian illumination on the array plane (z = const, normal +z).
/// Amplitude (A0/ω)·exp(−r²/ω²); power density κ·(A0/ω)²·exp(−2r²/ω²).
struct GaussianBeam {
  double amplitude = 1.0;  // A0
  double waist = 0.01;     // ω_z, m
  double kappa = 1.0;      // W per amplitude²
  geom::Vec3 center{};     // beam axis on the array plane, m
  geom::Vec3 direction{0.0, 0.0, -1.0};

  void validate() const;
  /// P0 = π·κ·A0²/2
  double total_power() const;
  /// κ·A0²/ω², the on-axis density in W/m².
  double peak_density() const;
  /// Density at array-plane point (x, y).
  double density(double x, double y) const;
  /// Field amplitude √κ·(A0/ω)·exp(−r²/ω²) at (x, y), so that amplitude² = density.
  double field_amplitude(double x, double y) const;
};

struct MirrorElement {
  geom::Vec3 center;
  double side;
  geom::UnitVec3 initial_normal;
  int row;
  int col;
};

/// I×J grid of square mirrors on a plane through `origin`, pitch side + gap.
/// Row i runs along +y, column j along +x, both centred on the origin.
class MirrorArray {
 public:
  MirrorArray(int rows, int cols, double side, double gap, geom::Vec3 origin = {},
              geom::UnitVec3 normal = geom::UnitVec3({0.0, 0.0, 1.0}));

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double side() const noexcept { return side_; }
  double gap() const noexcept { return gap_; }
  double pitch() const noexcept { return side_ + gap_; }
  std::size_t size() const noexcept { return elements_.size(); }

  const MirrorElement& at(int row, int col) const { return elements_[index(row, col)]; }
  const std::vector<MirrorElement>& elements() const noexcept { return elements_; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(col);
  }

 private:
  int rows_;
  int cols_;
  double side_;
  double gap_;
  std::vector<MirrorElement> elements_;
};

struct ElementAim {
  geom::RotationMatrix rotation;
  geom::UnitVec3 normal;  // rotated normal h′
  double theta;           // deflection angle arccos|h·h′|, radians
  int target;             // index into AimSolution::targets
};

struct AimSolution {
  std::vector<geom::Vec3> targets;
  std::vector<ElementAim> elements;  // one per array element, row-major
};

/// Points every element at `target`.
AimSolution aim_array(const MirrorArray& array, const GaussianBeam& beam, const geom::Vec3& target);

/// Points element e at targets[assignment[e]]; assignment −1 leaves the
/// element unrotated (theta 0, target −1).
AimSolution aim_elements(const MirrorArray& array, const GaussianBeam& beam,
                         const std::vector<geom::Vec3>& targets,
                         const std::vector<int>& assignment);

/// Beam power falling on one element square, by adaptive quadrature.
double element_incident_power(const GaussianBeam& beam, const MirrorElement& element,
                              double rel_tol = 1e-10);

/// Beam power inside a disk on the array plane.
double disk_incident_power(const GaussianBeam& beam, double cx, double cy, double radius,
                           double rel_tol = 1e-10);

/// P·cosθ for θ ∈ [0, π/2].
double reflected_power(double incident, double theta);

struct MapOptions {
  double window_x = 0.0;  // full width of the map, m; 0 → 1.5 element sides
  double window_y = 0.0;
  std::size_t nx = 256;
  std::size_t ny = 256;
  /// Half-size of the spot region C; defaults to half an element side.
  std::optional<double> spot_half_x;
  std::optional<double> spot_half_y;
  /// Only elements aimed at this target contribute; −1 takes all of them.
  int target = -1;
  int threads = 1;
};

/// Superposed receiver-plane density of every contributing element in the
/// target's local frame:
///   (κA0²/ω²)·Σ exp(−2((x + x_e)² + (y + y_e)²)/ω²)·cosθ_e   inside C, 0 outside,
/// with (x_e, y_e) the element centre relative to the beam centre.
PowerDensityMap receiver_power_density(const MirrorArray& array, const GaussianBeam& beam,
                                       const AimSolution& aim, const MapOptions& opts = {});

/// The same expression evaluated at a single point (no grid).
double receiver_density_at(const MirrorArray& array, const GaussianBeam& beam,
                           const AimSolution& aim, double x, double y,
                           const MapOptions& opts = {});

/// Concentric square rings of width ω around the beam centre; region[e] is
/// the ring index k ≥ 1 of element e (0 = unassigned).
struct RingLayout {
  double ring_width = 0.0;
  std::vector<int> region;

  int ring_count() const;
};

/// Assigns each element to ring ⌈max(|x_e|, |y_e|)/ω⌉.
RingLayout make_ring_layout(const MirrorArray& array, const GaussianBeam& beam, double ring_width);

/// Ring-based estimate Σ_k Σ_{e∈ring k} (1/4k²)(e^{−2(k−1)²ω²/ω_z²} − e^{−2k²ω²/ω_z²})·cosθ_e.
double efficiency_ring_estimate(const RingLayout& layout, const GaussianBeam& beam,
                                const AimSolution& aim);

/// Σ_e P_e·cosθ_e / P0 with P_e from quadrature.
double efficiency_numeric(const MirrorArray& array, const GaussianBeam& beam,
                          const AimSolution& aim);

/// Incident power of every element (row-major).
std::vector<double> incident_powers(const MirrorArray& array, const GaussianBeam& beam);

}  // namespace oirs::ma
