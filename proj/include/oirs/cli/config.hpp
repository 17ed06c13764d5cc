#pragma once

// Scenario file: JSON with sections beam, array, setup, targets, solver,
// grid, pointing, output. Lengths accept numbers in metres or strings with
// a unit suffix ("40 mm", "2cm", "532 nm"). Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oirs/analysis.hpp"
#include "oirs/geometry.hpp"
#include "oirs/opa.hpp"
#include "oirs/split.hpp"

namespace oirs::cli {

struct BeamConfig {
  double amplitude = 1.0;
  double waist = 0.01;
  double kappa = 1.0;
  geom::Vec3 center{};
  geom::Vec3 direction{0.0, 0.0, -1.0};
  std::string profile = "gaussian";  // "gaussian" | "uniform" (phased array only)
};

struct MirrorConfig {
  int rows = 4;
  int cols = 4;
  double side = 0.04;
  double gap = 0.005;
  std::optional<double> ring_width;  // default: the pitch
};

struct PhasedConfig {
  std::size_t cols = 64;
  std::size_t rows = 64;
  double pitch = 1e-6;
  double active = 1e-6;
  double gap_phase = 0.0;
  std::size_t samples_per_pitch = 8;
  std::size_t pad_factor = 1;
  std::string phase_file;  // optional mask to load, relative to the config
};

struct ArrayConfig {
  std::string type = "ma";  // "ma" | "opa"
  MirrorConfig ma;
  PhasedConfig opa;
};

struct SolverConfig {
  double ratio_tol = 0.05;
  int restarts = 32;
  std::uint64_t seed = 1;
  int threads = 1;
  int max_iters = 200;
  double tol = 1e-7;
  int patience = 10;
  double signal_fraction = 0.6;
  bool block_zero_order = false;
  double zero_order_radius = 0.0;
  int quantization_levels = 0;
  bool random_start = true;
  bool brute_force_check = false;
};

struct GridConfig {
  double window_x = 0.0;  // 0: command default
  double window_y = 0.0;
  std::size_t nx = 256;
  std::size_t ny = 256;
  std::optional<double> spot_half_x;
  std::optional<double> spot_half_y;
};

struct PointingConfig {
  double radius = 0.005;
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<analysis::Offset> offsets;
  double sigma = 0.0;
  std::size_t samples = 10000;
  std::string source = "target";  // phased array: "target" | "mask"
};

struct OutputConfig {
  std::string dir = "out";
};

struct ScenarioConfig {
  BeamConfig beam;
  ArrayConfig array;
  opa::OpticalSetup setup;
  split::SplitSpec targets;
  SolverConfig solver;
  GridConfig grid;
  PointingConfig pointing;
  OutputConfig output;
  std::string base_dir;  // directory of the config file
  std::uint64_t hash = 0;
};

/// Parses and range-checks a scenario. Throws Error(ConfigError).
ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

/// Parses "40 mm", "2cm", "1e-6", "532 nm" into metres.
double parse_length(const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace oirs::cli
