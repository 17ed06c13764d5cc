#include "oirs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "oirs/csv.hpp"
#include "oirs/error.hpp"
#include "oirs/parallel.hpp"
#include "oirs/simd/kernels.hpp"

namespace oirs::analysis {

void Receiver::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorKind::InvalidArgument, "receiver needs a finite centre and positive radius");
  }
}

namespace {

bool misses(const PowerDensityMap& map, double cx, double cy, double r) {
  const double nx = std::clamp(cx, map.x_axis().lower_edge(), map.x_axis().upper_edge());
  const double ny = std::clamp(cy, map.y_axis().lower_edge(), map.y_axis().upper_edge());
  return std::hypot(cx - nx, cy - ny) > r;
}

double disk_sum(const PowerDensityMap& map, const std::vector<double>& xs, double cx, double cy, double r) {
  const GridAxis& ax = map.x_axis();
  const GridAxis& ay = map.y_axis();
  const auto& k = simd::kernels();
  auto index_range = [](const GridAxis& a, double lo, double hi) {
    const double f0 = std::ceil((lo - a.first) / a.spacing);
    const double f1 = std::floor((hi - a.first) / a.spacing);
    const double last = static_cast<double>(a.count) - 1.0;
    const double i0 = std::clamp(f0 - 1.0, 0.0, last);
    const double i1 = std::clamp(f1 + 1.0, 0.0, last);
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(i0), static_cast<std::size_t>(i1));
  };
  const auto [x0, x1] = index_range(ax, cx - r, cx + r);
  const auto [y0, y1] = index_range(ay, cy - r, cy + r);
  const double r2 = r * r;
  double sum = 0.0;
  for (std::size_t iy = y0; iy <= y1; ++iy) {
    const double dy = ay.at(iy) - cy;
    if (dy * dy > r2) continue;
    sum += k.disk_row_sum(map.row(iy).data() + x0, xs.data() + x0, x1 - x0 + 1, cx, dy * dy, r2);
  }
  return sum * map.cell_area();
}

std::vector<double> x_coords(const PowerDensityMap& map) {
  std::vector<double> xs(map.nx());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = map.x_axis().at(i);
  return xs;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double received_power(const PowerDensityMap& map, const Receiver& rx) {
  rx.validate();
  if (misses(map, rx.x, rx.y, rx.radius)) {
    throw Error(ErrorKind::OutOfWindow, "receiver aperture lies outside the map");
  }
  return disk_sum(map, x_coords(map), rx.x, rx.y, rx.radius);
}

std::vector<double> region_powers(const PowerDensityMap& map, const split::SplitSpec& spec) {
  std::vector<double> out;
  for (const auto& t : spec.targets) out.push_back(received_power(map, {t.center.x, t.center.y, t.radius}));
  return out;
}

double ratio_error(const std::vector<double>& powers, const std::vector<double>& weights) {
  if (powers.size() != weights.size() || powers.empty()) {
    throw Error(ErrorKind::InvalidArgument, "one power per weight expected");
  }
  double ps = 0.0, ws = 0.0;
  for (double p : powers) ps += p;
  for (double w : weights) ws += w;
  if (!(ps > 0.0)) return 1.0;
  double err = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    err = std::max(err, std::abs((powers[i] / ps) / (weights[i] / ws) - 1.0));
  }
  return err;
}

std::vector<SweepPoint> offset_sweep(const PowerDensityMap& map, const Receiver& rx,
                                     const std::vector<Offset>& offsets) {
  rx.validate();
  const auto xs = x_coords(map);
  std::vector<SweepPoint> out;
  out.reserve(offsets.size());
  for (const auto& o : offsets) {
    SweepPoint p{o.dx, o.dy, 0.0, true};
    const double cx = rx.x + o.dx, cy = rx.y + o.dy;
    if (misses(map, cx, cy, rx.radius)) {
      p.in_window = false;
    } else {
      p.power = disk_sum(map, xs, cx, cy, rx.radius);
    }
    out.push_back(p);
  }
  return out;
}

std::pair<double, double> jitter_normals(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

FadingSampleSet fading_samples(const PowerDensityMap& map, const Receiver& rx, double sigma,
                               std::size_t n, std::uint64_t seed, int threads) {
  rx.validate();
  if (!(sigma >= 0.0) || !std::isfinite(sigma) || n == 0) {
    throw Error(ErrorKind::InvalidArgument, "need sigma ≥ 0 and at least one sample");
  }
  FadingSampleSet set;
  set.sigma = sigma;
  set.seed = seed;
  set.powers.assign(n, 0.0);
  const auto xs = x_coords(map);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto [gx, gy] = jitter_normals(seed, i);
      const double cx = rx.x + sigma * gx, cy = rx.y + sigma * gy;
      set.powers[i] = misses(map, cx, cy, rx.radius) ? 0.0 : disk_sum(map, xs, cx, cy, rx.radius);
    }
  });
  return set;
}

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "no values to summarize");
  Summary s;
  s.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.variance = s.count > 1 ? sq / static_cast<double>(s.count - 1) : 0.0;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(s.count)));
  s.p05 = sorted[rank == 0 ? 0 : rank - 1];
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

void write_sweep(std::ostream& os, const std::vector<SweepPoint>& sweep) {
  os << "dx_m,dy_m,power_w\n";
  for (const auto& p : sweep) {
    os << csv::format(p.dx) << ',' << csv::format(p.dy) << ',' << csv::format(p.power) << '\n';
  }
}

void write_samples(std::ostream& os, const FadingSampleSet& samples) {
  os << "sample_idx,power_w\n";
  for (std::size_t i = 0; i < samples.powers.size(); ++i) {
    os << i << ',' << csv::format(samples.powers[i]) << '\n';
  }
}

}  // namespace oirs::analysis
