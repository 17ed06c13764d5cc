#pragma once

// Optical phased array: pixelated phase screen with a fixed gap phase, its
// Fourier-plane (lens focal plane) field and phase-mask retrieval.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oirs/fft.hpp"
#include "oirs/grid.hpp"
#include "oirs/ma.hpp"

namespace oirs::opa {

struct OpticalSetup {
  double wavelength = 532e-9;  // m
  double focal_length = 0.25;  // m

  double wave_number() const;
  void validate() const;
};

/// M×N pixels (M along x, N along y) on pitch Δd with active d×d squares
/// centred in each pitch cell. phase[n·M + m] is pixel (m, n) in [0, 2π).
struct PhasedArray {
  std::size_t cols = 64;  // M
  std::size_t rows = 64;  // N
  double pitch = 1e-6;
  double active = 1e-6;
  double gap_phase = 0.0;
  std::vector<double> phase;

  static PhasedArray uniform(std::size_t cols, std::size_t rows, double pitch, double active,
                             double phase = 0.0, double gap_phase = 0.0);

  void validate() const;
  double fill_factor() const { return (active / pitch) * (active / pitch); }
  double width() const { return static_cast<double>(cols) * pitch; }
  double height() const { return static_cast<double>(rows) * pitch; }
  double& at(std::size_t m, std::size_t n) { return phase[n * cols + m]; }
  double at(std::size_t m, std::size_t n) const { return phase[n * cols + m]; }
};

/// Wraps an angle into [0, 2π).
double wrap_phase(double phi);

/// Cell-centred grid covering the aperture with `samples_per_pitch` samples
/// per pixel, zero-padded by `pad_factor` on each axis.
std::pair<GridAxis, GridAxis> array_grid(const PhasedArray& array, std::size_t samples_per_pitch,
                                         std::size_t pad_factor = 1);

FieldGrid gaussian_incident(const ma::GaussianBeam& beam, const GridAxis& x, const GridAxis& y);
FieldGrid uniform_incident(const GridAxis& x, const GridAxis& y, double amplitude = 1.0);

/// Focal-plane axis matching a near-field axis: spacing λf/(n·Δx), sample n/2 at 0.
GridAxis focal_axis(const GridAxis& near, const OpticalSetup& setup);

/// Lens Fourier transform between a near-field grid and the focal plane:
///   T(u, v) = (ΔxΔy/λf)·Σ t(x, y)·exp(−2πi(xu + yv)/λf)
/// evaluated exactly at the grid coordinates, so Σ|T|²ΔuΔv = Σ|t|²ΔxΔy.
class Fraunhofer {
 public:
  Fraunhofer(const GridAxis& x, const GridAxis& y, const OpticalSetup& setup);

  const GridAxis& u_axis() const noexcept { return u_; }
  const GridAxis& v_axis() const noexcept { return v_; }
  const GridAxis& x_axis() const noexcept { return x_; }
  const GridAxis& y_axis() const noexcept { return y_; }

  FieldGrid forward(const FieldGrid& near) const;
  FieldGrid inverse(const FieldGrid& focal) const;
  /// In-place variants on raw row-major storage of the matching size.
  void forward_inplace(std::complex<double>* data) const;
  void inverse_inplace(std::complex<double>* data) const;

 private:
  GridAxis x_, y_, u_, v_;
  Fft2d fft_;
  std::vector<std::complex<double>> pre_;   // applied before the forward DFT
  std::vector<std::complex<double>> post_;  // applied after it, includes ΔxΔy/λf
  std::vector<std::complex<double>> pre_inv_;
  std::vector<std::complex<double>> post_inv_;
};

FieldGrid fraunhofer(const FieldGrid& field, const OpticalSetup& setup);
FieldGrid inverse_fraunhofer(const FieldGrid& focal, const GridAxis& x, const GridAxis& y,
                             const OpticalSetup& setup);

/// How the grid samples fall on the pixel lattice: per sample, the pixel it
/// belongs to (−1 outside the aperture) and the fraction of its cell that is
/// active area. Requires the pitch to be a whole number of samples and pixel
/// edges to sit on cell edges; SamplingError otherwise.
class PixelRaster {
 public:
  PixelRaster(const PhasedArray& array, const GridAxis& x, const GridAxis& y);

  std::size_t nx() const noexcept { return pix_x_.size(); }
  std::size_t ny() const noexcept { return pix_y_.size(); }
  std::size_t samples_per_pitch() const noexcept { return per_pitch_; }
  int pixel_x(std::size_t ix) const { return pix_x_[ix]; }
  int pixel_y(std::size_t iy) const { return pix_y_[iy]; }
  /// Active fraction α of sample (ix, iy); the remaining 1 − α is gap when the
  /// sample lies inside the aperture.
  double active(std::size_t ix, std::size_t iy) const { return act_x_[ix] * act_y_[iy]; }
  bool inside(std::size_t ix, std::size_t iy) const { return pix_x_[ix] >= 0 && pix_y_[iy] >= 0; }
  /// First grid index of pixel column m / row n.
  std::size_t first_x(std::size_t m) const { return first_x_ + m * per_pitch_; }
  std::size_t first_y(std::size_t n) const { return first_y_ + n * per_pitch_; }

 private:
  std::vector<int> pix_x_, pix_y_;
  std::vector<double> act_x_, act_y_;
  std::size_t per_pitch_ = 0;
  std::size_t first_x_ = 0, first_y_ = 0;
};

/// t(x, y): incident × (α·e^{iφ_pixel} + (1 − α)·e^{iφ_c}) inside the
/// aperture, zero outside.
FieldGrid build_reflectance(const PhasedArray& array, const FieldGrid& incident);
/// The gap-only part incident × (1 − α)·e^{iφ_c}.
FieldGrid gap_reflectance(const PhasedArray& array, const FieldGrid& incident);
/// The active-pixel part incident × α·e^{iφ_pixel}.
FieldGrid active_reflectance(const PhasedArray& array, const FieldGrid& incident);

/// Far field of the gap-only reflectance (the part no phase setting changes).
FieldGrid non_adjustable_field(const PhasedArray& array, const FieldGrid& incident,
                               const OpticalSetup& setup);

/// Energy of (total − non-adjustable) far field over energy of the total.
double opa_efficiency(const PhasedArray& array, const FieldGrid& incident,
                      const OpticalSetup& setup);

/// Incident energy over the aperture times η_O: the most a target can carry.
double steerable_energy(const PhasedArray& array, const FieldGrid& incident, const OpticalSetup& setup);

/// Gap share of the aperture area as sampled on the incident grid.
double sampled_gap_fraction(const PhasedArray& array, const GridAxis& x, const GridAxis& y);

struct RetrievalConfig {
  int max_iters = 200;
  /// Stop once the best correlation improved by less than tol over the last
  /// `patience` iterations.
  double tol = 1e-7;
  int patience = 10;
  std::uint64_t seed = 1;
  bool random_start = true;
  /// Exclude the zero-order disk from the signal window (a physical blocker
  /// at the focal point). When false the zero-order field is kept as a fixed
  /// background that the target is superposed on.
  bool block_zero_order = false;
  /// Radius of the zero-order disk; 0 picks 2·λf/(aperture width).
  double zero_order_radius = 0.0;
  /// 0 keeps phases continuous, otherwise rounds to this many levels.
  int quantization_levels = 0;
};

struct RetrievalReport {
  PhasedArray array;             // best phase mask found
  FieldGrid achieved;            // its focal-plane field
  double correlation = 0.0;      // of |T| with |T_target| inside the window
  int iterations = 0;
  bool converged = false;        // stopped on tol rather than max_iters
  std::vector<double> history;   // best correlation after each iteration
  std::vector<unsigned char> window;  // signal window, focal grid layout
};

/// Iterative Fourier-transform retrieval of a phase-only mask whose far field
/// matches `target` (the desired adjustable field E) inside its support.
/// Throws Infeasible if the target carries more energy than the array can
/// steer (incident energy × η_O).
RetrievalReport retrieve_phase(const FieldGrid& target, const PhasedArray& array,
                               const FieldGrid& incident, const OpticalSetup& setup,
                               const RetrievalConfig& config = {});

/// Normalized cross-correlation Σ|a||b| / √(Σ|a|²Σ|b|²) over window samples.
double amplitude_correlation(const FieldGrid& a, const FieldGrid& b,
                             const std::vector<unsigned char>& window);

/// Writes the phase grid as CSV: a `# opa-phase v1 M N pitch_m d_m` line,
/// optional extra `#` lines, then N rows of M radians at 17 significant digits.
void write_phase_mask(std::ostream& os, const PhasedArray& array,
                      const std::vector<std::string>& comments = {});
/// Reads a mask written by write_phase_mask. Gap phase is not stored and
/// comes back as 0.
PhasedArray read_phase_mask(std::istream& is);

}  // namespace oirs::opa
