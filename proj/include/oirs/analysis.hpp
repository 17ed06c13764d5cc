#pragma once

// Receiver-side integration of power-density maps, pointing offsets and
// jitter (fading) sampling.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "oirs/grid.hpp"
#include "oirs/split.hpp"

namespace oirs::analysis {

struct Receiver {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  void validate() const;
};

/// Σ density × cell area over cells whose centres fall inside the aperture
/// disk. OutOfWindow if the disk misses the map entirely.
double received_power(const PowerDensityMap& map, const Receiver& rx);

/// Received power over each target region (centre x, y and radius).
std::vector<double> region_powers(const PowerDensityMap& map, const split::SplitSpec& spec);

/// max_i |share_i / expected_i − 1| with shares P_i/ΣP and expected k_i/Σk.
double ratio_error(const std::vector<double>& powers, const std::vector<double>& weights);

struct Offset {
  double dx = 0.0;
  double dy = 0.0;
};

struct SweepPoint {
  double dx = 0.0;
  double dy = 0.0;
  double power = 0.0;
  bool in_window = true;  // false: the displaced disk missed the map; power 0
};

std::vector<SweepPoint> offset_sweep(const PowerDensityMap& map, const Receiver& rx,
                                     const std::vector<Offset>& offsets);

struct FadingSampleSet {
  std::vector<double> powers;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Received power at n centres displaced by i.i.d. isotropic Gaussian offsets
/// of standard deviation sigma per axis. Sample i draws from its own stream
/// splitmix64(seed, i), so results do not depend on `threads`.
FadingSampleSet fading_samples(const PowerDensityMap& map, const Receiver& rx, double sigma,
                               std::size_t n, std::uint64_t seed, int threads = 1);

/// The two standard normal deviates used for sample i.
std::pair<double, double> jitter_normals(std::uint64_t seed, std::uint64_t index);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 for a single sample
  double p05 = 0.0;       // nearest-rank 5th percentile
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(const std::vector<double>& values);

/// `dx_m,dy_m,power_w`; missed offsets carry power 0.
void write_sweep(std::ostream& os, const std::vector<SweepPoint>& sweep);
/// `sample_idx,power_w`.
void write_samples(std::ostream& os, const FadingSampleSet& samples);

}  // namespace oirs::analysis
