#include "oirs/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "oirs/csv.hpp"
#include "oirs/error.hpp"
#include "oirs/ma.hpp"
#include "oirs/opa.hpp"
#include "oirs/split.hpp"

namespace oirs::cli {

namespace fs = std::filesystem;
using csv::format;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Context {
  std::string command;
  ScenarioConfig config;
  fs::path out_dir;
  std::ostream& log;
  std::vector<std::string> files;

  std::string header() const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config.hash));
    return "oirs " + command + " config_fnv1a=" + hex + " seed=" + std::to_string(config.solver.seed);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body, bool header_first = true) {
    const fs::path path = out_dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
    if (header_first) os << "# " << header() << '\n';
    body(os);
    os.flush();
    if (!os) throw Error(ErrorKind::IoError, "failed writing '" + path.string() + "'");
    files.push_back(path.string());
  }

  void timing(const std::string& stage, double ms) const {
    log << "wall_time_ms " << stage << ' ' << ms << '\n';
  }
};

// Summary lines are "key: value".
class Summary {
 public:
  Summary& add(const std::string& key, const std::string& value) {
    lines_.push_back(key + ": " + value);
    return *this;
  }
  Summary& add(const std::string& key, double value) { return add(key, format(value)); }
  Summary& add_int(const std::string& key, long long value) { return add(key, std::to_string(value)); }
  void write(Context& ctx) const {
    ctx.write("summary.txt", [&](std::ostream& os) {
      for (const auto& l : lines_) os << l << '\n';
    });
  }

 private:
  std::vector<std::string> lines_;
};

ma::GaussianBeam make_beam(const ScenarioConfig& c) {
  ma::GaussianBeam b;
  b.amplitude = c.beam.amplitude;
  b.waist = c.beam.waist;
  b.kappa = c.beam.kappa;
  b.center = c.beam.center;
  b.direction = c.beam.direction;
  return b;
}

void require_type(const ScenarioConfig& c, const std::string& type, const std::string& command) {
  if (c.array.type != type) {
    config_error("command '" + command + "' needs array.type '" + type + "'");
  }
}

ma::MirrorArray make_mirrors(const ScenarioConfig& c) {
  const auto& m = c.array.ma;
  return ma::MirrorArray(m.rows, m.cols, m.side, m.gap);
}

ma::MapOptions map_options(const ScenarioConfig& c, int target) {
  ma::MapOptions o;
  o.window_x = c.grid.window_x;
  o.window_y = c.grid.window_y;
  o.nx = c.grid.nx;
  o.ny = c.grid.ny;
  o.spot_half_x = c.grid.spot_half_x;
  o.spot_half_y = c.grid.spot_half_y;
  o.target = target;
  o.threads = c.solver.threads;
  return o;
}

struct OpaProblem {
  opa::PhasedArray array;
  FieldGrid incident;
};

OpaProblem opa_problem(const ScenarioConfig& c, bool load_mask) {
  const auto& o = c.array.opa;
  OpaProblem p{opa::PhasedArray::uniform(o.cols, o.rows, o.pitch, o.active, 0.0, o.gap_phase), {}};
  if (load_mask && !o.phase_file.empty()) {
    fs::path path(o.phase_file);
    if (path.is_relative()) path = fs::path(c.base_dir) / path;
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot open array.phase_file '" + path.string() + "'");
    opa::PhasedArray mask = opa::read_phase_mask(in);
    if (mask.cols != o.cols || mask.rows != o.rows) config_error("phase mask size differs from array.cols × array.rows");
    p.array.phase = mask.phase;
    for (double& v : p.array.phase) v = opa::wrap_phase(v);
  }
  const auto [x, y] = opa::array_grid(p.array, o.samples_per_pitch, o.pad_factor);
  const auto beam = make_beam(c);
  if (c.beam.profile == "uniform") {
    p.incident = opa::uniform_incident(x, y, beam.field_amplitude(beam.center.x, beam.center.y));
  } else {
    p.incident = opa::gaussian_incident(beam, x, y);
  }
  return p;
}

// Crops a focal-plane map to |u| ≤ wx/2, |v| ≤ wy/2.
PowerDensityMap crop(const PowerDensityMap& full, double wx, double wy) {
  auto range = [](const GridAxis& a, double half) {
    std::size_t lo = a.count, hi = 0;
    for (std::size_t i = 0; i < a.count; ++i) {
      if (std::abs(a.at(i)) <= half) {
        lo = std::min(lo, i);
        hi = i;
      }
    }
    if (lo > hi) config_error("map window is smaller than one focal-plane sample");
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };
  const auto [x0, x1] = range(full.x_axis(), 0.5 * wx);
  const auto [y0, y1] = range(full.y_axis(), 0.5 * wy);
  GridAxis ax{x1 - x0 + 1, full.x_axis().spacing, full.x_axis().at(x0)};
  GridAxis ay{y1 - y0 + 1, full.y_axis().spacing, full.y_axis().at(y0)};
  PowerDensityMap out(ax, ay);
  for (std::size_t iy = y0; iy <= y1; ++iy)
    for (std::size_t ix = x0; ix <= x1; ++ix) out(ix - x0, iy - y0) = full(ix, iy);
  return out;
}

// Default focal window: the target regions with a quarter margin, at least 20 du.
std::pair<double, double> focal_window(const ScenarioConfig& c, const GridAxis& u, const GridAxis& v) {
  double half = 10.0 * std::max(u.spacing, v.spacing);
  for (const auto& t : c.targets.targets) {
    half = std::max(half, 1.25 * (std::max(std::abs(t.center.x), std::abs(t.center.y)) + t.radius));
  }
  return {c.grid.window_x > 0.0 ? c.grid.window_x : 2.0 * half, c.grid.window_y > 0.0 ? c.grid.window_y : 2.0 * half};
}

FieldGrid opa_target(const ScenarioConfig& c, const OpaProblem& p, const opa::Fraunhofer& lens) {
  split::ComposeOptions opts;
  opts.energy = c.solver.signal_fraction * opa::steerable_energy(p.array, p.incident, c.setup);
  return split::compose_target_field(c.targets, lens.u_axis(), lens.v_axis(), opts);
}

opa::RetrievalConfig retrieval_config(const ScenarioConfig& c) {
  opa::RetrievalConfig r;
  r.max_iters = c.solver.max_iters;
  r.tol = c.solver.tol;
  r.patience = c.solver.patience;
  r.seed = c.solver.seed;
  r.random_start = c.solver.random_start;
  r.block_zero_order = c.solver.block_zero_order;
  r.zero_order_radius = c.solver.zero_order_radius;
  r.quantization_levels = c.solver.quantization_levels;
  return r;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format(v[i]);
  return s;
}

void write_map(Context& ctx, const std::string& name, const PowerDensityMap& map) {
  ctx.write(name, [&](std::ostream& os) { csv::write_map(os, map); });
}

// ---------------------------------------------------------------- commands

void cmd_aim(Context& ctx) {
  const auto& c = ctx.config;
  require_type(c, "ma", ctx.command);
  const auto array = make_mirrors(c);
  const auto beam = make_beam(c);
  Stopwatch sw;
  std::vector<ma::AimSolution> aims;
  for (const auto& t : c.targets.targets) aims.push_back(ma::aim_array(array, beam, t.center));
  ctx.timing("aim", sw.ms());
  ctx.write("aim.csv", [&](std::ostream& os) {
    os << "target,row,col,theta_rad,nx,ny,nz,r00,r01,r02,r10,r11,r12,r20,r21,r22\n";
    for (std::size_t k = 0; k < aims.size(); ++k) {
      for (std::size_t e = 0; e < array.size(); ++e) {
        const auto& a = aims[k].elements[e];
        const auto& el = array.elements()[e];
        os << k + 1 << ',' << el.row << ',' << el.col << ',' << format(a.theta) << ',' << format(a.normal.x())
           << ',' << format(a.normal.y()) << ',' << format(a.normal.z());
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) os << ',' << format(a.rotation(i, j));
        os << '\n';
      }
    }
  });
  Summary s;
  s.add("command", "aim").add_int("elements", static_cast<long long>(array.size()));
  for (std::size_t k = 0; k < aims.size(); ++k) {
    double mean = 0.0, mx = 0.0;
    for (const auto& a : aims[k].elements) {
      mean += a.theta;
      mx = std::max(mx, a.theta);
    }
    mean /= static_cast<double>(aims[k].elements.size());
    s.add("target_" + std::to_string(k + 1) + "_theta_mean_rad", mean);
    s.add("target_" + std::to_string(k + 1) + "_theta_max_rad", mx);
  }
  s.write(ctx);
}

void cmd_powermap(Context& ctx) {
  const auto& c = ctx.config;
  Summary s;
  s.add("command", "powermap").add("array", c.array.type);
  PowerDensityMap map;
  if (c.array.type == "ma") {
    const auto array = make_mirrors(c);
    const auto beam = make_beam(c);
    Stopwatch sw;
    const auto aim = ma::aim_array(array, beam, c.targets.targets.front().center);
    ctx.timing("aim", sw.ms());
    map = ma::receiver_power_density(array, beam, aim, map_options(c, -1));
  } else {
    const auto p = opa_problem(c, true);
    const opa::Fraunhofer lens(p.incident.x_axis(), p.incident.y_axis(), c.setup);
    const auto focal = lens.forward(opa::build_reflectance(p.array, p.incident));
    const auto [wx, wy] = focal_window(c, lens.u_axis(), lens.v_axis());
    map = crop(intensity(focal), wx, wy);
  }
  std::size_t peak = 0;
  for (std::size_t i = 1; i < map.size(); ++i)
    if (map.values()[i] > map.values()[peak]) peak = i;
  s.add("map_nx", std::to_string(map.nx())).add("map_ny", std::to_string(map.ny()));
  s.add("integrated_power_w", integrate(map));
  s.add("peak_w_per_m2", map.values()[peak]);
  s.add("peak_x_m", map.x_axis().at(peak % map.nx())).add("peak_y_m", map.y_axis().at(peak / map.nx()));
  write_map(ctx, "map.csv", map);
  s.write(ctx);
}

void cmd_efficiency(Context& ctx) {
  const auto& c = ctx.config;
  Summary s;
  s.add("command", "efficiency").add("array", c.array.type);
  if (c.array.type == "ma") {
    const auto array = make_mirrors(c);
    const auto beam = make_beam(c);
    Stopwatch sw;
    const auto aim = ma::aim_array(array, beam, c.targets.targets.front().center);
    ctx.timing("aim", sw.ms());
    const double width = c.array.ma.ring_width.value_or(array.pitch());
    const auto layout = ma::make_ring_layout(array, beam, width);
    const double ring = ma::efficiency_ring_estimate(layout, beam, aim);
    const double numeric = ma::efficiency_numeric(array, beam, aim);
    s.add("ring_width_m", width).add_int("rings", layout.ring_count());
    s.add("eta_ring", ring).add("eta_numeric", numeric);
    s.add("relative_discrepancy", numeric > 0.0 ? std::abs(ring - numeric) / numeric : 0.0);
    ctx.log << "eta_ring " << format(ring) << " eta_numeric " << format(numeric) << '\n';
  } else {
    const auto p = opa_problem(c, true);
    const double eta = opa::opa_efficiency(p.array, p.incident, c.setup);
    s.add("fill_factor", p.array.fill_factor());
    s.add("sampled_gap_fraction", opa::sampled_gap_fraction(p.array, p.incident.x_axis(), p.incident.y_axis()));
    s.add("eta_opa", eta);
    ctx.log << "eta_opa " << format(eta) << '\n';
  }
  s.write(ctx);
}

void cmd_split_ma(Context& ctx) {
  const auto& c = ctx.config;
  require_type(c, "ma", ctx.command);
  const auto array = make_mirrors(c);
  const auto beam = make_beam(c);
  const auto weights = c.targets.weights();
  split::GroupingConfig gc{c.solver.ratio_tol, c.solver.restarts, c.solver.seed, c.solver.threads};

  Stopwatch sw;
  const auto matrices = split::power_matrices(array, beam, c.targets);
  split::Partition best;
  std::optional<split::InfeasibleRatioError> infeasible;
  try {
    best = split::optimize_grouping(matrices, weights, gc);
  } catch (const split::InfeasibleRatioError& e) {
    best = e.best();
    infeasible.emplace(e);
  }
  ctx.timing("grouping", sw.ms());

  Summary s;
  s.add("command", "split-ma").add("ratio_tol", c.solver.ratio_tol);
  s.add_int("restarts", c.solver.restarts);
  s.add("group_power_w", join(best.group_power));
  std::vector<double> achieved;
  for (double p : best.group_power) achieved.push_back(best.total > 0.0 ? p / best.total : 0.0);
  s.add("achieved_shares", join(achieved));
  s.add("deviation", best.deviation).add("total_power_w", best.total);
  s.add("feasible", best.feasible() ? "true" : "false");
  if (c.solver.brute_force_check) {
    try {
      const auto oracle = split::brute_force_grouping(matrices, weights, c.solver.ratio_tol);
      s.add("exhaustive_total_power_w", oracle.total).add("exhaustive_deviation", oracle.deviation);
      s.add("matches_exhaustive", oracle.group == best.group ? "true" : "false");
    } catch (const split::InfeasibleRatioError& e) {
      s.add("exhaustive_total_power_w", e.best().total).add("exhaustive_deviation", e.best().deviation);
      s.add("matches_exhaustive", e.best().group == best.group ? "true" : "false");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TooLarge) throw;
      s.add("exhaustive", "too large");
    }
  }
  ctx.write("partition.csv", [&](std::ostream& os) { split::write_partition(os, best); });

  const auto aim = ma::aim_elements(array, beam, [&] {
    std::vector<geom::Vec3> t;
    for (const auto& x : c.targets.targets) t.push_back(x.center);
    return t;
  }(), split::aim_assignment(best));
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const bool any = std::find(best.group.begin(), best.group.end(), static_cast<int>(k + 1)) != best.group.end();
    if (!any) continue;
    write_map(ctx, "map_" + std::to_string(k + 1) + ".csv",
              ma::receiver_power_density(array, beam, aim, map_options(c, static_cast<int>(k))));
  }
  s.write(ctx);
  if (infeasible) throw *infeasible;
}

struct RetrievalRun {
  OpaProblem problem;
  opa::RetrievalReport report;
  GridAxis u, v;
  double target_energy;
};

RetrievalRun run_retrieval(Context& ctx) {
  const auto& c = ctx.config;
  require_type(c, "opa", ctx.command);
  auto p = opa_problem(c, false);
  const opa::Fraunhofer lens(p.incident.x_axis(), p.incident.y_axis(), c.setup);
  const auto target = opa_target(c, p, lens);
  Stopwatch sw;
  auto report = opa::retrieve_phase(target, p.array, p.incident, c.setup, retrieval_config(c));
  ctx.timing("retrieval", sw.ms());
  return {std::move(p), std::move(report), lens.u_axis(), lens.v_axis(), field_energy(target)};
}

void write_mask(Context& ctx, const opa::PhasedArray& array) {
  ctx.write("phase.csv", [&](std::ostream& os) { opa::write_phase_mask(os, array, {ctx.header()}); }, false);
}

void retrieval_summary(Summary& s, const RetrievalRun& r) {
  s.add("correlation", r.report.correlation);
  s.add_int("iterations", r.report.iterations);
  s.add("converged", r.report.converged ? "true" : "false");
  s.add("target_energy", r.target_energy);
}

void cmd_retrieve_phase(Context& ctx) {
  const auto r = run_retrieval(ctx);
  write_mask(ctx, r.report.array);
  ctx.write("history.csv", [&](std::ostream& os) {
    os << "iteration,correlation\n";
    for (std::size_t i = 0; i < r.report.history.size(); ++i) os << i + 1 << ',' << format(r.report.history[i]) << '\n';
  });
  Summary s;
  s.add("command", "retrieve-phase");
  retrieval_summary(s, r);
  s.write(ctx);
}

void cmd_split_opa(Context& ctx) {
  const auto& c = ctx.config;
  const auto r = run_retrieval(ctx);
  const auto full = intensity(r.report.achieved);
  const auto powers = analysis::region_powers(full, c.targets);
  const auto weights = c.targets.weights();
  double total = 0.0, wsum = 0.0;
  for (double p : powers) total += p;
  for (double w : weights) wsum += w;

  write_mask(ctx, r.report.array);
  const auto [wx, wy] = focal_window(c, r.u, r.v);
  write_map(ctx, "map.csv", crop(full, wx, wy));
  ctx.write("regions.csv", [&](std::ostream& os) {
    os << "region,u_m,v_m,radius_m,weight,power_w,share,expected_share\n";
    for (std::size_t i = 0; i < powers.size(); ++i) {
      const auto& t = c.targets.targets[i];
      os << i + 1 << ',' << format(t.center.x) << ',' << format(t.center.y) << ',' << format(t.radius) << ','
         << format(t.weight) << ',' << format(powers[i]) << ',' << format(total > 0.0 ? powers[i] / total : 0.0)
         << ',' << format(weights[i] / wsum) << '\n';
    }
  });
  Summary s;
  s.add("command", "split-opa");
  retrieval_summary(s, r);
  s.add("zero_order_blocked", c.solver.block_zero_order ? "true" : "false");
  s.add("region_power_w", join(powers));
  s.add("ratio_error", analysis::ratio_error(powers, weights));
  s.write(ctx);
}

void cmd_pointing_sweep(Context& ctx) {
  const auto& c = ctx.config;
  PowerDensityMap map;
  if (c.array.type == "ma") {
    const auto array = make_mirrors(c);
    const auto beam = make_beam(c);
    const auto aim = ma::aim_array(array, beam, c.targets.targets.front().center);
    map = ma::receiver_power_density(array, beam, aim, map_options(c, -1));
  } else {
    const auto p = opa_problem(c, true);
    const opa::Fraunhofer lens(p.incident.x_axis(), p.incident.y_axis(), c.setup);
    if (c.pointing.source == "target") {
      map = intensity(opa_target(c, p, lens));
    } else {
      map = intensity(lens.forward(opa::build_reflectance(p.array, p.incident)));
    }
  }
  const analysis::Receiver rx{c.pointing.center_x, c.pointing.center_y, c.pointing.radius};
  std::vector<analysis::Offset> offsets = c.pointing.offsets;
  if (offsets.empty()) offsets.push_back({0.0, 0.0});

  Stopwatch sw;
  const double nominal = analysis::received_power(map, rx);
  const auto sweep = analysis::offset_sweep(map, rx, offsets);
  const auto samples = analysis::fading_samples(map, rx, c.pointing.sigma, c.pointing.samples, c.solver.seed,
                                                c.solver.threads);
  ctx.timing("pointing", sw.ms());
  const auto stats = analysis::summarize(samples.powers);

  ctx.write("sweep.csv", [&](std::ostream& os) { analysis::write_sweep(os, sweep); });
  ctx.write("samples.csv", [&](std::ostream& os) { analysis::write_samples(os, samples); });
  double lo = sweep.front().power, hi = lo;
  for (const auto& p : sweep) {
    lo = std::min(lo, p.power);
    hi = std::max(hi, p.power);
  }
  Summary s;
  s.add("command", "pointing-sweep").add("array", c.array.type);
  s.add("receiver_radius_m", rx.radius).add("nominal_power_w", nominal);
  s.add("sweep_min_w", lo).add("sweep_max_w", hi);
  s.add("sweep_relative_variation", nominal > 0.0 ? (hi - lo) / nominal : 0.0);
  s.add("sigma_m", c.pointing.sigma).add_int("samples", static_cast<long long>(stats.count));
  s.add("sample_mean_w", stats.mean).add("sample_variance_w2", stats.variance).add("sample_p05_w", stats.p05);
  s.write(ctx);
}

using Handler = void (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"aim", cmd_aim},
      {"powermap", cmd_powermap},
      {"efficiency", cmd_efficiency},
      {"split-ma", cmd_split_ma},
      {"split-opa", cmd_split_opa},
      {"retrieve-phase", cmd_retrieve_phase},
      {"pointing-sweep", cmd_pointing_sweep},
  };
  return h;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::InfeasibleRatio: return 4;
    default: return 3;
  }
}

std::vector<std::string> execute(const std::string& command, ScenarioConfig config, const Overrides& overrides,
                                 std::ostream& log) {
  const auto it = std::find_if(handlers().begin(), handlers().end(), [&](const auto& h) { return h.first == command; });
  if (it == handlers().end()) config_error("unknown command '" + command + "'");
  if (overrides.seed) config.solver.seed = *overrides.seed;
  if (overrides.threads) {
    if (*overrides.threads < 1 || *overrides.threads > 256) config_error("--threads must lie in [1, 256]");
    config.solver.threads = *overrides.threads;
  }
  fs::path out = overrides.out_dir ? fs::path(*overrides.out_dir) : fs::path(config.output.dir);
  if (!overrides.out_dir && out.is_relative()) out = fs::path(config.base_dir) / out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + out.string() + "'");
  Context ctx{command, std::move(config), out, log, {}};
  Stopwatch sw;
  try {
    it->second(ctx);
  } catch (...) {
    ctx.timing("total", sw.ms());
    throw;
  }
  ctx.timing("total", sw.ms());
  return ctx.files;
}

int run(const std::string& command, const std::string& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err) {
  auto report = [&](ErrorKind kind, const std::string& msg) {
    const int code = exit_code_for(kind);
    err << "error kind=" << to_string(kind) << " exit=" << code << " message=" << one_line(msg) << '\n';
    return code;
  };
  try {
    const auto files = execute(command, load_config(config_path), overrides, out);
    for (const auto& f : files) out << "wrote " << f << '\n';
    return 0;
  } catch (const Error& e) {
    return report(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report(ErrorKind::InvalidArgument, e.what());
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optical reflecting-surface simulation toolkit", "oirs"};
  std::string command, config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "Scenario JSON file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override solver.seed");
  auto* out_opt = app.add_option("--out", out_dir, "Override output.dir");
  auto* threads_opt = app.add_option("--threads", threads, "Override solver.threads");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error kind=" << to_string(ErrorKind::ConfigError) << " exit=2 message=" << one_line(e.what()) << '\n';
    return 2;
  }
  Overrides o;
  if (*seed_opt) o.seed = seed;
  if (*out_opt) o.out_dir = out_dir;
  if (*threads_opt) o.threads = threads;
  return run(command, config_path, o, out, err);
}

}  // namespace oirs::cli
