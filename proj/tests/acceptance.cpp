// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oirs/analysis.hpp"
#include "oirs/cli/commands.hpp"
#include "oirs/ma.hpp"
#include "oirs/opa.hpp"
#include "oirs/split.hpp"

using namespace oirs;
namespace fs = std::filesystem;
using geom::Vec3;

namespace {

const std::string kData = OIRS_TEST_DATA;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double angle(const Vec3& a, const Vec3& b) { return std::atan2(geom::norm(geom::cross(a, b)), geom::dot(a, b)); }

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  return v / geom::norm(v);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("oirs_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> files_in(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    m[e.path().filename().string()] = os.str();
  }
  return m;
}

std::string summary_value(const fs::path& dir, const std::string& key) {
  std::ifstream in(dir / "summary.txt");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  return "nan";
}

void run_cli(const std::string& command, const std::string& config, const fs::path& out) {
  std::ostringstream log;
  cli::Overrides o;
  o.out_dir = out.string();
  cli::execute(command, cli::load_config(kData + "/" + config), o, log);
}

Verdict rotation_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  double worst_angle = 0.0, worst_orth = 0.0, worst_det = 0.0;
  int done = 0;
  while (done < 10000) {
    const Vec3 origin{pos(rng), pos(rng), pos(rng)};
    const geom::UnitVec3 normal(random_unit(rng));
    ma::GaussianBeam beam;
    beam.direction = random_unit(rng);
    const Vec3 target = origin + random_unit(rng) * (1.0 + 2.0 * std::abs(pos(rng)));
    if (angle(beam.direction, target - origin) < 1e-3) continue;
    if (std::abs(geom::dot(normal.vec(), (target - origin) / geom::norm(target - origin))) < 1e-3) continue;
    const ma::MirrorArray array(1, 1, 0.01, 0.0, origin, normal);
    const auto aim = ma::aim_array(array, beam, target);
    const auto& R = aim.elements[0].rotation;
    const Vec3 h = R.apply(normal.vec());
    const Vec3 out = geom::reflect(beam.direction, geom::UnitVec3(h));
    worst_angle = std::max(worst_angle, angle(out, target - origin));
    worst_orth = std::max(worst_orth, R.orthonormality_error());
    worst_det = std::max(worst_det, std::abs(R.determinant() - 1.0));
    ++done;
  }
  const double t = seconds_since(t0);
  const bool pass = worst_angle <= 1e-9 && worst_orth <= 1e-10 && worst_det <= 1e-10 && t < 5.0;
  return {pass, fmt("max pointing error %.3g rad", worst_angle) + fmt(", max |RtR-I| %.3g", worst_orth) +
                    fmt(", max |det-1| %.3g", worst_det) + fmt(", %.2f s", t)};
}

Verdict gaussian_closed_form() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    ma::GaussianBeam b;
    b.waist = 0.002 * (1 + i);
    b.amplitude = 0.5 + 0.1 * i;
    const double w = b.waist * (0.2 + 0.13 * i);
    const double exact = b.total_power() * (1.0 - std::exp(-2.0 * w * w / (b.waist * b.waist)));
    worst = std::max(worst, std::abs(ma::disk_incident_power(b, 0, 0, w) / exact - 1.0));
  }
  return {worst <= 1e-6, fmt("20 pairs, worst relative error %.3g", worst)};
}

Verdict ring_vs_numeric() {
  const auto t0 = std::chrono::steady_clock::now();
  const ma::MirrorArray a(4, 4, 0.04, 0.005);
  ma::GaussianBeam b;
  b.waist = 0.1;
  const auto aim = ma::aim_array(a, b, {0, 0, 0.25});
  const auto layout = ma::make_ring_layout(a, b, a.pitch());
  const double ring = ma::efficiency_ring_estimate(layout, b, aim);
  const double numeric = ma::efficiency_numeric(a, b, aim);
  const double rel = std::abs(ring - numeric) / numeric;
  const double t = seconds_since(t0);
  return {rel <= 0.1 && t < 10.0, fmt("ring %.6f", ring) + fmt(" vs numeric %.6f", numeric) +
                                       fmt(", relative discrepancy %.4f", rel) + fmt(", %.2f s", t)};
}

Verdict fraunhofer_checks() {
  const opa::OpticalSetup setup;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto x = GridAxis::centered_cells(64, 0.25e-6), y = GridAxis::centered_cells(32, 0.25e-6);
    FieldGrid f(x, y);
    for (auto& z : f.values()) z = {g(rng), g(rng)};
    const auto T = opa::fraunhofer(f, setup);
    worst = std::max(worst, std::abs(field_energy(T) / field_energy(f) - 1.0));
  }

  const auto sq = opa::PhasedArray::uniform(16, 16, 1e-6, 1e-6);
  const auto [sx, sy] = opa::array_grid(sq, 4, 4);
  const auto S = opa::fraunhofer(opa::build_reflectance(sq, opa::uniform_incident(sx, sy)), setup);
  const std::size_t row = S.ny() / 2;
  double zero_u = 0.0;
  for (std::size_t i = S.nx() / 2 + 1; i + 1 < S.nx(); ++i) {
    if (std::abs(S(i, row)) < std::abs(S(i - 1, row)) && std::abs(S(i, row)) <= std::abs(S(i + 1, row))) {
      zero_u = S.x_axis().at(i);
      break;
    }
  }
  const double lf = setup.wavelength * setup.focal_length;
  const double zero_err = std::abs(zero_u - lf / sq.width()) / S.x_axis().spacing;

  auto ramp = opa::PhasedArray::uniform(32, 32, 1e-6, 1e-6);
  const auto [rx, ry] = opa::array_grid(ramp, 4, 2);
  const double du = opa::focal_axis(rx, setup).spacing;
  const double a = 9.0 * du / lf;
  for (std::size_t n = 0; n < ramp.rows; ++n)
    for (std::size_t m = 0; m < ramp.cols; ++m)
      ramp.at(m, n) = opa::wrap_phase(2.0 * std::numbers::pi * a * (static_cast<double>(m) + 0.5 - 16.0) * 1e-6);
  const auto R = opa::fraunhofer(opa::build_reflectance(ramp, opa::uniform_incident(rx, ry)), setup);
  std::size_t best = 0;
  for (std::size_t i = 1; i < R.size(); ++i)
    if (std::norm(R.values()[i]) > std::norm(R.values()[best])) best = i;
  const double ramp_err = std::abs(R.x_axis().at(best % R.nx()) - lf * a) / du;

  const bool pass = worst <= 1e-9 && zero_err <= 0.5 && ramp_err <= 1.0;
  return {pass, fmt("Parseval worst %.3g", worst) + fmt(", first zero off by %.3f cells", zero_err) +
                    fmt(", ramp peak off by %.3f cells", ramp_err)};
}

Verdict phase_retrieval() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = scratch("retrieval_a"), b = scratch("retrieval_b");
  run_cli("split-opa", "opa_desk.json", a);
  const double t = seconds_since(t0);
  run_cli("split-opa", "opa_desk.json", b);
  const double corr = std::stod(summary_value(a, "correlation"));
  const double ratio = std::stod(summary_value(a, "ratio_error"));
  const int iters = std::stoi(summary_value(a, "iterations"));
  const bool same = files_in(a) == files_in(b);
  const bool pass = corr >= 0.9 && ratio <= 0.05 && iters <= 200 && same && t < 60.0;
  return {pass, fmt("correlation %.5f", corr) + fmt(", worst region ratio error %.4f", ratio) +
                    fmt(", %.0f iterations", iters) + (same ? ", repeat identical" : ", repeat DIFFERS") +
                    fmt(", %.1f s", t)};
}

Verdict splitting() {
  double worst_share = 1.0, worst_dev = 0.0;
  std::uniform_real_distribution<double> d(0.2, 1.0);
  for (std::uint64_t s = 1; s <= 25; ++s) {
    std::mt19937_64 rng(1000 + s);
    std::vector<split::PowerMatrix> mats(2, split::PowerMatrix{3, 3, {}});
    for (auto& m : mats)
      for (int e = 0; e < 9; ++e) m.values.push_back(d(rng));
    split::GroupingConfig cfg;
    cfg.seed = s;
    const auto h = split::optimize_grouping(mats, {1.0, 2.0}, cfg);
    const auto o = split::brute_force_grouping(mats, {1.0, 2.0}, 0.05);
    worst_share = std::min(worst_share, h.total / o.total);
    worst_dev = std::max(worst_dev, h.deviation);
  }
  const ma::MirrorArray array(4, 4, 0.04, 0.005);
  ma::GaussianBeam beam;
  beam.waist = 0.1;
  split::SplitSpec spec{{{{0.02, 0.03, 0.25}, 1, 0}, {{-0.03, -0.04, 0.25}, 2, 0}, {{-0.04, 0.03, 0.25}, 3, 0}}};
  const auto p = split::optimize_grouping(split::power_matrices(array, beam, spec), spec.weights());
  const bool pass = worst_share >= 0.98 && worst_dev <= 0.05 && p.deviation <= 0.05;
  return {pass, fmt("3x3 worst heuristic/optimum %.4f", worst_share) + fmt(", worst deviation %.4f", worst_dev) +
                    fmt("; 4x4 three-target deviation %.4f", p.deviation)};
}

Verdict opa_efficiency_bound() {
  const opa::OpticalSetup setup;
  const auto desk = opa::PhasedArray::uniform(64, 64, 1e-6, 1e-6 * std::sqrt(0.957));
  const auto [x, y] = opa::array_grid(desk, 8);
  const auto inc = opa::uniform_incident(x, y);
  const double eta = opa::opa_efficiency(desk, inc, setup);
  const auto full = opa::PhasedArray::uniform(64, 64, 1e-6, 1e-6);
  const double one = opa::opa_efficiency(full, inc, setup);
  return {eta >= 0.90 && eta <= 1.0 && one == 1.0, fmt("fill 95.7%%: eta %.5f", eta) + fmt(", full fill: eta %.17g", one)};
}

Verdict pointing_ordering() {
  const double radius = 0.005, sigma = 0.2 * radius;
  const std::size_t n = 10000;
  const analysis::Receiver rx{0, 0, radius};

  const ma::MirrorArray array(4, 4, 0.04, 0.005);
  ma::GaussianBeam beam;
  beam.waist = 0.1;
  const auto aim = ma::aim_array(array, beam, {0, 0, 0.25});
  ma::MapOptions o;
  o.nx = o.ny = 256;
  const auto ma_map = ma::receiver_power_density(array, beam, aim, o);

  const auto u = GridAxis::centered_fft(512, 0.1 / 512);
  split::SplitSpec disk{{{{0, 0, 0}, 1.0, 0.01}}};
  auto opa_map = intensity(split::compose_target_field(disk, u, u));
  const double scale = analysis::received_power(ma_map, rx) / analysis::received_power(opa_map, rx);
  for (auto& v : opa_map.values()) v *= scale;

  const auto s_ma = analysis::summarize(analysis::fading_samples(ma_map, rx, sigma, n, 17).powers);
  const auto s_opa = analysis::summarize(analysis::fading_samples(opa_map, rx, sigma, n, 17).powers);
  return {s_opa.variance <= s_ma.variance,
          fmt("variance OPA %.4g", s_opa.variance) + fmt(" vs MA %.4g W^2", s_ma.variance) +
              fmt(" at nominal %.5g W", analysis::received_power(ma_map, rx))};
}

Verdict determinism() {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"aim", "ma_experiment.json"},         {"powermap", "ma_experiment.json"},
      {"efficiency", "ma_experiment.json"},  {"pointing-sweep", "ma_experiment.json"},
      {"split-ma", "ma_split_experiment.json"}, {"powermap", "opa_small.json"},
      {"efficiency", "opa_small.json"},      {"retrieve-phase", "opa_small.json"},
      {"split-opa", "opa_small.json"},       {"pointing-sweep", "opa_small.json"},
  };
  int identical = 0;
  std::string first_bad;
  for (const auto& [cmd, cfg] : runs) {
    const auto a = scratch("det_" + cmd + "_a"), b = scratch("det_" + cmd + "_b");
    run_cli(cmd, cfg, a);
    run_cli(cmd, cfg, b);
    if (files_in(a) == files_in(b)) {
      ++identical;
    } else if (first_bad.empty()) {
      first_bad = cmd + " on " + cfg;
    }
  }
  const bool pass = identical == static_cast<int>(runs.size());
  return {pass, std::to_string(identical) + "/" + std::to_string(runs.size()) + " command runs byte-identical" +
                    (pass ? "" : ", first mismatch: " + first_bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"rotation correctness", rotation_correctness},
      {"Gaussian power closed form", gaussian_closed_form},
      {"ring vs numeric efficiency", ring_vs_numeric},
      {"Fraunhofer transform", fraunhofer_checks},
      {"phase retrieval", phase_retrieval},
      {"mirror splitting optimality", splitting},
      {"phased-array efficiency bound", opa_efficiency_bound},
      {"pointing robustness ordering", pointing_ordering},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
