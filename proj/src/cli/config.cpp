#include "oirs/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oirs/error.hpp"

namespace oirs::cli {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail("unknown key '" + where + "." + k + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + " must be finite");
  return d;
}

double length(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_length(v.get<std::string>());
    } catch (const Error& e) {
      fail(where + ": " + e.what());
    }
  }
  return number(v, where);
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + " must be an integer");
  return v.get<std::int64_t>();
}

bool boolean(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where + " must be true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a string");
  return v.get<std::string>();
}

geom::Vec3 point(const json& v, const std::string& where, bool allow_2d) {
  if (!v.is_array() || !(v.size() == 3 || (allow_2d && v.size() == 2))) {
    fail(where + (allow_2d ? " must be [x, y] or [x, y, z]" : " must be [x, y, z]"));
  }
  geom::Vec3 p{};
  p.x = length(v[0], where + "[0]");
  p.y = length(v[1], where + "[1]");
  if (v.size() == 3) p.z = length(v[2], where + "[2]");
  return p;
}

void positive(double v, const std::string& where) {
  if (!(v > 0.0)) fail(where + " must be positive");
}

template <class T>
void in_range(T v, T lo, T hi, const std::string& where) {
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << where << " must lie in [" << lo << ", " << hi << "]";
    fail(os.str());
  }
}

void parse_beam(const json& j, BeamConfig& b) {
  allow_keys(j, "beam", {"amplitude", "waist", "kappa", "center", "direction", "profile"});
  if (j.contains("amplitude")) b.amplitude = number(j["amplitude"], "beam.amplitude");
  if (j.contains("waist")) b.waist = length(j["waist"], "beam.waist");
  if (j.contains("kappa")) b.kappa = number(j["kappa"], "beam.kappa");
  if (j.contains("center")) b.center = point(j["center"], "beam.center", true);
  if (j.contains("direction")) b.direction = point(j["direction"], "beam.direction", false);
  if (j.contains("profile")) b.profile = string(j["profile"], "beam.profile");
  positive(b.amplitude, "beam.amplitude");
  positive(b.waist, "beam.waist");
  positive(b.kappa, "beam.kappa");
  if (!(geom::norm(b.direction) > 0.0)) fail("beam.direction must be nonzero");
  if (b.profile != "gaussian" && b.profile != "uniform") fail("beam.profile must be 'gaussian' or 'uniform'");
}

void parse_array(const json& j, ArrayConfig& a) {
  allow_keys(j, "array", {"type", "rows", "cols", "side", "gap", "ring_width", "pitch", "active",
                          "fill_factor", "gap_phase", "samples_per_pitch", "pad_factor", "phase_file"});
  if (j.contains("type")) a.type = string(j["type"], "array.type");
  if (a.type == "ma") {
    for (const char* k : {"pitch", "active", "fill_factor", "gap_phase", "samples_per_pitch", "pad_factor", "phase_file"}) {
      if (j.contains(k)) fail(std::string("array.") + k + " applies to phased arrays only");
    }
    auto& m = a.ma;
    if (j.contains("rows")) m.rows = static_cast<int>(integer(j["rows"], "array.rows"));
    if (j.contains("cols")) m.cols = static_cast<int>(integer(j["cols"], "array.cols"));
    if (j.contains("side")) m.side = length(j["side"], "array.side");
    if (j.contains("gap")) m.gap = length(j["gap"], "array.gap");
    if (j.contains("ring_width")) m.ring_width = length(j["ring_width"], "array.ring_width");
    in_range(m.rows, 1, 4096, "array.rows");
    in_range(m.cols, 1, 4096, "array.cols");
    positive(m.side, "array.side");
    if (!(m.gap >= 0.0)) fail("array.gap must be ≥ 0");
    if (m.ring_width) positive(*m.ring_width, "array.ring_width");
  } else if (a.type == "opa") {
    for (const char* k : {"side", "gap", "ring_width"}) {
      if (j.contains(k)) fail(std::string("array.") + k + " applies to mirror arrays only");
    }
    auto& o = a.opa;
    if (j.contains("rows")) o.rows = static_cast<std::size_t>(integer(j["rows"], "array.rows"));
    if (j.contains("cols")) o.cols = static_cast<std::size_t>(integer(j["cols"], "array.cols"));
    if (j.contains("pitch")) o.pitch = length(j["pitch"], "array.pitch");
    positive(o.pitch, "array.pitch");
    if (j.contains("active") && j.contains("fill_factor")) fail("give array.active or array.fill_factor, not both");
    o.active = o.pitch;
    if (j.contains("active")) o.active = length(j["active"], "array.active");
    if (j.contains("fill_factor")) {
      const double ff = number(j["fill_factor"], "array.fill_factor");
      if (!(ff > 0.0) || ff > 1.0) fail("array.fill_factor must lie in (0, 1]");
      o.active = ff == 1.0 ? o.pitch : o.pitch * std::sqrt(ff);
    }
    if (j.contains("gap_phase")) o.gap_phase = number(j["gap_phase"], "array.gap_phase");
    if (j.contains("samples_per_pitch")) {
      o.samples_per_pitch = static_cast<std::size_t>(integer(j["samples_per_pitch"], "array.samples_per_pitch"));
    }
    if (j.contains("pad_factor")) o.pad_factor = static_cast<std::size_t>(integer(j["pad_factor"], "array.pad_factor"));
    if (j.contains("phase_file")) o.phase_file = string(j["phase_file"], "array.phase_file");
    in_range<std::size_t>(o.rows, 1, 4096, "array.rows");
    in_range<std::size_t>(o.cols, 1, 4096, "array.cols");
    if (!(o.active > 0.0) || o.active > o.pitch) fail("array.active must lie in (0, pitch]");
    in_range<std::size_t>(o.samples_per_pitch, 4, 64, "array.samples_per_pitch");
    in_range<std::size_t>(o.pad_factor, 1, 8, "array.pad_factor");
    const std::size_t n = std::max(o.rows, o.cols) * o.samples_per_pitch * o.pad_factor;
    if (n > 8192) fail("sample grid exceeds 8192 per axis");
  } else {
    fail("array.type must be 'ma' or 'opa'");
  }
}

void parse_setup(const json& j, opa::OpticalSetup& s) {
  allow_keys(j, "setup", {"wavelength", "focal_length"});
  if (j.contains("wavelength")) s.wavelength = length(j["wavelength"], "setup.wavelength");
  if (j.contains("focal_length")) s.focal_length = length(j["focal_length"], "setup.focal_length");
  positive(s.wavelength, "setup.wavelength");
  positive(s.focal_length, "setup.focal_length");
}

void parse_targets(const json& j, split::SplitSpec& spec) {
  if (!j.is_array() || j.empty()) fail("targets must be a non-empty list");
  spec.targets.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    allow_keys(j[i], where, {"center", "weight", "radius"});
    split::SplitTarget t;
    if (!j[i].contains("center")) fail(where + ".center is required");
    t.center = point(j[i]["center"], where + ".center", true);
    if (j[i].contains("weight")) t.weight = number(j[i]["weight"], where + ".weight");
    if (j[i].contains("radius")) t.radius = length(j[i]["radius"], where + ".radius");
    positive(t.weight, where + ".weight");
    if (!(t.radius >= 0.0)) fail(where + ".radius must be ≥ 0");
    spec.targets.push_back(t);
  }
}

void parse_solver(const json& j, SolverConfig& s) {
  allow_keys(j, "solver", {"ratio_tol", "restarts", "seed", "threads", "max_iters", "tol", "patience",
                           "signal_fraction", "block_zero_order", "zero_order_radius",
                           "quantization_levels", "random_start", "brute_force_check"});
  if (j.contains("ratio_tol")) s.ratio_tol = number(j["ratio_tol"], "solver.ratio_tol");
  if (j.contains("restarts")) s.restarts = static_cast<int>(integer(j["restarts"], "solver.restarts"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("solver.seed must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) s.threads = static_cast<int>(integer(j["threads"], "solver.threads"));
  if (j.contains("max_iters")) s.max_iters = static_cast<int>(integer(j["max_iters"], "solver.max_iters"));
  if (j.contains("tol")) s.tol = number(j["tol"], "solver.tol");
  if (j.contains("patience")) s.patience = static_cast<int>(integer(j["patience"], "solver.patience"));
  if (j.contains("signal_fraction")) s.signal_fraction = number(j["signal_fraction"], "solver.signal_fraction");
  if (j.contains("block_zero_order")) s.block_zero_order = boolean(j["block_zero_order"], "solver.block_zero_order");
  if (j.contains("zero_order_radius")) s.zero_order_radius = length(j["zero_order_radius"], "solver.zero_order_radius");
  if (j.contains("quantization_levels")) {
    s.quantization_levels = static_cast<int>(integer(j["quantization_levels"], "solver.quantization_levels"));
  }
  if (j.contains("random_start")) s.random_start = boolean(j["random_start"], "solver.random_start");
  if (j.contains("brute_force_check")) s.brute_force_check = boolean(j["brute_force_check"], "solver.brute_force_check");
  if (!(s.ratio_tol > 0.0) || !(s.ratio_tol < 0.5)) fail("solver.ratio_tol must lie in (0, 0.5)");
  in_range(s.restarts, 1, 100000, "solver.restarts");
  in_range(s.threads, 1, 256, "solver.threads");
  in_range(s.max_iters, 0, 100000, "solver.max_iters");
  if (!(s.tol >= 0.0)) fail("solver.tol must be ≥ 0");
  in_range(s.patience, 1, 100000, "solver.patience");
  if (!(s.signal_fraction > 0.0) || s.signal_fraction > 1.0) fail("solver.signal_fraction must lie in (0, 1]");
  if (!(s.zero_order_radius >= 0.0)) fail("solver.zero_order_radius must be ≥ 0");
  in_range(s.quantization_levels, 0, 65536, "solver.quantization_levels");
}

void parse_grid(const json& j, GridConfig& g) {
  allow_keys(j, "grid", {"window_x", "window_y", "nx", "ny", "spot_half_x", "spot_half_y"});
  if (j.contains("window_x")) g.window_x = length(j["window_x"], "grid.window_x");
  if (j.contains("window_y")) g.window_y = length(j["window_y"], "grid.window_y");
  if (j.contains("nx")) g.nx = static_cast<std::size_t>(integer(j["nx"], "grid.nx"));
  if (j.contains("ny")) g.ny = static_cast<std::size_t>(integer(j["ny"], "grid.ny"));
  if (j.contains("spot_half_x")) g.spot_half_x = length(j["spot_half_x"], "grid.spot_half_x");
  if (j.contains("spot_half_y")) g.spot_half_y = length(j["spot_half_y"], "grid.spot_half_y");
  if (!(g.window_x >= 0.0) || !(g.window_y >= 0.0)) fail("grid windows must be ≥ 0");
  in_range<std::size_t>(g.nx, 2, 8192, "grid.nx");
  in_range<std::size_t>(g.ny, 2, 8192, "grid.ny");
  if (g.nx % 2 || g.ny % 2) fail("grid.nx and grid.ny must be even");
  if (g.spot_half_x) positive(*g.spot_half_x, "grid.spot_half_x");
  if (g.spot_half_y) positive(*g.spot_half_y, "grid.spot_half_y");
}

void parse_pointing(const json& j, PointingConfig& p) {
  allow_keys(j, "pointing", {"radius", "center", "offsets", "sigma", "samples", "source"});
  if (j.contains("radius")) p.radius = length(j["radius"], "pointing.radius");
  if (j.contains("center")) {
    const auto c = point(j["center"], "pointing.center", true);
    p.center_x = c.x;
    p.center_y = c.y;
  }
  if (j.contains("offsets")) {
    const json& o = j["offsets"];
    if (o.is_array()) {
      for (std::size_t i = 0; i < o.size(); ++i) {
        const auto d = point(o[i], "pointing.offsets[" + std::to_string(i) + "]", true);
        p.offsets.push_back({d.x, d.y});
      }
    } else {
      allow_keys(o, "pointing.offsets", {"max", "steps", "axis"});
      const double max = o.contains("max") ? length(o["max"], "pointing.offsets.max") : 0.0;
      const auto steps = o.contains("steps") ? integer(o["steps"], "pointing.offsets.steps") : 11;
      const std::string axis = o.contains("axis") ? string(o["axis"], "pointing.offsets.axis") : "x";
      if (!(max >= 0.0)) fail("pointing.offsets.max must be ≥ 0");
      in_range<std::int64_t>(steps, 1, 100000, "pointing.offsets.steps");
      if (axis != "x" && axis != "y") fail("pointing.offsets.axis must be 'x' or 'y'");
      for (std::int64_t i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : -max + 2.0 * max * static_cast<double>(i) / static_cast<double>(steps - 1);
        p.offsets.push_back(axis == "x" ? analysis::Offset{t, 0.0} : analysis::Offset{0.0, t});
      }
    }
  }
  if (j.contains("sigma")) p.sigma = length(j["sigma"], "pointing.sigma");
  if (j.contains("samples")) p.samples = static_cast<std::size_t>(integer(j["samples"], "pointing.samples"));
  if (j.contains("source")) p.source = string(j["source"], "pointing.source");
  positive(p.radius, "pointing.radius");
  if (!(p.sigma >= 0.0)) fail("pointing.sigma must be ≥ 0");
  in_range<std::size_t>(p.samples, 1, 10000000, "pointing.samples");
  if (p.source != "target" && p.source != "mask") fail("pointing.source must be 'target' or 'mask'");
}

}  // namespace

double parse_length(const std::string& text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  double value = 0.0;
  const auto res = std::from_chars(text.data() + b, text.data() + e, value);
  if (res.ec != std::errc() || !std::isfinite(value)) {
    throw Error(ErrorKind::ConfigError, "cannot read a length from '" + text + "'");
  }
  std::string unit(res.ptr, text.data() + e);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front()))) unit.erase(0, 1);
  if (unit.empty() || unit == "m") return value;
  if (unit == "cm") return value * 1e-2;
  if (unit == "mm") return value * 1e-3;
  if (unit == "um") return value * 1e-6;
  if (unit == "nm") return value * 1e-9;
  throw Error(ErrorKind::ConfigError, "unknown length unit '" + unit + "' (use m, cm, mm, um or nm)");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  allow_keys(root, "config", {"beam", "array", "setup", "targets", "solver", "grid", "pointing", "output"});
  ScenarioConfig c;
  c.base_dir = base_dir;
  c.hash = fnv1a(text);
  if (root.contains("beam")) parse_beam(root["beam"], c.beam);
  if (!root.contains("array")) fail("array section is required");
  parse_array(root["array"], c.array);
  if (root.contains("setup")) parse_setup(root["setup"], c.setup);
  if (!root.contains("targets")) fail("targets section is required");
  parse_targets(root["targets"], c.targets);
  if (root.contains("solver")) parse_solver(root["solver"], c.solver);
  if (root.contains("grid")) parse_grid(root["grid"], c.grid);
  if (root.contains("pointing")) parse_pointing(root["pointing"], c.pointing);
  if (root.contains("output")) {
    allow_keys(root["output"], "output", {"dir"});
    if (root["output"].contains("dir")) c.output.dir = string(root["output"]["dir"], "output.dir");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), parent.empty() ? "." : parent.string());
}

}  // namespace oirs::cli
