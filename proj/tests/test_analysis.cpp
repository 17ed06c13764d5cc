#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oirs/analysis.hpp"
#include "oirs/error.hpp"
#include "oirs/ma.hpp"

using namespace oirs;
using namespace oirs::analysis;

namespace {

PowerDensityMap uniform_map(std::size_t n, double extent, double value) {
  const auto a = GridAxis::centered_cells(n, extent / static_cast<double>(n));
  return PowerDensityMap(a, a, value);
}

// Flat-top disk of radius R and density rho on an n×n grid.
PowerDensityMap disk_map(std::size_t n, double extent, double R, double rho) {
  auto m = uniform_map(n, extent, 0.0);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = m.x_axis().at(ix), y = m.y_axis().at(iy);
      if (x * x + y * y <= R * R) m(ix, iy) = rho;
    }
  return m;
}

}  // namespace

TEST_CASE("uniform density over a disk") {
  const auto m = uniform_map(256, 0.1, 3.0);
  const double r = 0.02;
  CHECK(std::abs(received_power(m, {0.005, -0.01, r}) / (3.0 * std::numbers::pi * r * r) - 1.0) <= 0.01);
}

TEST_CASE("disk outside the support and outside the window") {
  const auto m = disk_map(128, 0.1, 0.01, 1.0);
  CHECK(received_power(m, {0.035, 0.035, 0.005}) == 0.0);
  try {
    received_power(m, {0.2, 0.0, 0.01});
    FAIL("expected OutOfWindow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfWindow);
  }
  CHECK_THROWS_AS(received_power(m, {0, 0, 0}), Error);
}

TEST_CASE("Gaussian patch: centred disk of radius w captures 1 - e^-2") {
  ma::GaussianBeam b;
  b.waist = 0.01;
  const auto a = GridAxis::centered_cells(256, 0.06 / 256);
  PowerDensityMap m(a, a);
  for (std::size_t iy = 0; iy < a.count; ++iy)
    for (std::size_t ix = 0; ix < a.count; ++ix) m(ix, iy) = b.density(a.at(ix), a.at(iy));
  const double expect = b.total_power() * (1.0 - std::exp(-2.0));
  CHECK(std::abs(received_power(m, {0, 0, 0.01}) / expect - 1.0) <= 0.01);
}

TEST_CASE("domination implies larger received power") {
  auto lo = disk_map(64, 0.1, 0.03, 1.0);
  auto hi = lo;
  for (auto& v : hi.values()) v += 0.5;
  const Receiver rx{0.01, 0.0, 0.02};
  CHECK(received_power(hi, rx) >= received_power(lo, rx));
}

TEST_CASE("offset sweep") {
  const auto m = disk_map(512, 0.05, 0.01, 2.0);
  const Receiver rx{0, 0, 0.0025};
  std::vector<Offset> offs;
  for (int i = -6; i <= 6; ++i) offs.push_back({i * 0.0005, 0.0});
  offs.push_back({0.0, 0.003});
  offs.push_back({1.0, 0.0});
  const auto sweep = offset_sweep(m, rx, offs);
  CHECK(sweep[6].power == received_power(m, rx));
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    lo = std::min(lo, sweep[i].power);
    hi = std::max(hi, sweep[i].power);
  }
  CHECK((hi - lo) / sweep[6].power <= 0.01);
  CHECK_FALSE(sweep.back().in_window);
  CHECK(sweep.back().power == 0.0);
  std::ostringstream os;
  write_sweep(os, {sweep[6]});
  CHECK(os.str().rfind("dx_m,dy_m,power_w\n0,0,", 0) == 0);
}

TEST_CASE("asymmetric mirror field: some offset beats the centred receiver") {
  const ma::MirrorArray a(4, 4, 0.04, 0.005);
  ma::GaussianBeam b;
  b.waist = 0.1;
  b.center = {0.05, 0.0, 0.0};
  const auto aim = ma::aim_array(a, b, {0, 0, 0.25});
  ma::MapOptions o;
  o.nx = o.ny = 128;
  const auto map = ma::receiver_power_density(a, b, aim, o);
  const Receiver rx{0, 0, 0.005};
  std::vector<Offset> offs;
  for (int i = -10; i <= 10; ++i) offs.push_back({i * 0.001, 0.0});
  const double nominal = received_power(map, rx);
  bool gain = false;
  for (const auto& p : offset_sweep(map, rx, offs)) gain = gain || p.power > nominal;
  CHECK(gain);
}

TEST_CASE("fading samples") {
  const auto m = disk_map(256, 0.05, 0.01, 1.0);
  const Receiver rx{0, 0, 0.003};
  const auto zero = fading_samples(m, rx, 0.0, 50, 1);
  for (double p : zero.powers) CHECK(p == received_power(m, rx));
  const double p0 = received_power(m, rx);
  CHECK(summarize(zero.powers).variance <= 1e-24 * p0 * p0);

  const auto wide = fading_samples(m, rx, 10.0, 2000, 2);
  CHECK(summarize(wide.powers).mean < 1e-3 * received_power(m, rx));

  const auto a = fading_samples(m, rx, 0.004, 1000, 7, 1);
  const auto b = fading_samples(m, rx, 0.004, 1000, 7, 3);
  CHECK(a.powers == b.powers);
  const auto c = fading_samples(m, rx, 0.004, 1000, 8, 1);
  CHECK(a.powers != c.powers);
  for (double p : a.powers) CHECK(p >= 0.0);

  double mean_x = 0.0, var_x = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto [gx, gy] = jitter_normals(3, static_cast<std::uint64_t>(i));
    mean_x += gx;
    var_x += gx * gx + gy * gy;
  }
  CHECK(std::abs(mean_x / n) < 0.03);
  CHECK(std::abs(var_x / (2.0 * n) - 1.0) < 0.03);

  std::ostringstream os;
  write_samples(os, FadingSampleSet{{1.5, 2.0}, 0.0, 0});
  CHECK(os.str() == "sample_idx,power_w\n0,1.5\n1,2\n");
}

TEST_CASE("summary statistics") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(50.5));
  CHECK(s.variance == doctest::Approx(841.6666666666666));
  CHECK(s.p05 == 5.0);
  CHECK(s.min == 1.0);
  CHECK(s.max == 100.0);
  CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("region powers and ratio error") {
  const auto m = uniform_map(200, 0.1, 1.0);
  split::SplitSpec spec{{{{0.02, 0.0, 0}, 1.0, 0.01}, {{-0.02, 0.0, 0}, 1.0, 0.01}}};
  const auto p = region_powers(m, spec);
  CHECK(p[0] == doctest::Approx(p[1]).epsilon(1e-12));
  CHECK(ratio_error(p, {1.0, 1.0}) < 1e-12);
  CHECK(ratio_error({1.0, 3.0}, {1.0, 2.0}) == doctest::Approx(0.25));
}
