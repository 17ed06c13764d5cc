#include "oirs/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "oirs/parallel.hpp"

namespace oirs::split {

void SplitSpec::validate() const {
  if (targets.empty()) throw Error(ErrorKind::InvalidArgument, "split needs at least one target");
  for (const auto& t : targets) {
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
      throw Error(ErrorKind::InvalidArgument, "split weights must be positive");
    }
    if (!(t.radius >= 0.0) || !geom::is_finite(t.center)) {
      throw Error(ErrorKind::InvalidArgument, "split target must be finite with radius ≥ 0");
    }
  }
}

std::vector<double> SplitSpec::weights() const {
  std::vector<double> w;
  for (const auto& t : targets) w.push_back(t.weight);
  return w;
}

std::vector<PowerMatrix> power_matrices(const ma::MirrorArray& array, const ma::GaussianBeam& beam,
                                        const SplitSpec& spec) {
  spec.validate();
  const std::vector<double> incident = ma::incident_powers(array, beam);
  std::vector<PowerMatrix> out;
  for (std::size_t k = 0; k < spec.targets.size(); ++k) {
    ma::AimSolution aim;
    try {
      aim = ma::aim_array(array, beam, spec.targets[k].center);
    } catch (const GeometryError& err) {
      throw GeometryError(err.kind(), std::string(err.what()) + " toward target " + std::to_string(k + 1),
                          err.row(), err.col(), static_cast<int>(k));
    }
    PowerMatrix m{array.rows(), array.cols(), std::vector<double>(incident.size())};
    for (std::size_t e = 0; e < incident.size(); ++e) {
      m.values[e] = ma::reflected_power(incident[e], aim.elements[e].theta);
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

void check_inputs(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights,
                  double ratio_tol) {
  if (matrices.empty() || matrices.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "need one power matrix per weight");
  }
  for (const auto& m : matrices) {
    if (m.rows != matrices[0].rows || m.cols != matrices[0].cols ||
        m.values.size() != static_cast<std::size_t>(m.rows * m.cols) || m.values.empty()) {
      throw Error(ErrorKind::InvalidArgument, "power matrices differ in shape");
    }
    for (double v : m.values)
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "negative deliverable power");
  }
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "weights must be positive");
  if (!(ratio_tol > 0.0) || !(ratio_tol < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "ratio tolerance must lie in (0, 0.5)");
  }
}

struct Key {
  double excess;
  double total;
};

bool better(const Key& a, const Key& b) {
  if (a.excess != b.excess) return a.excess < b.excess;
  return a.total > b.total;
}

// Incrementally maintained group powers for one assignment.
class State {
 public:
  State(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights, double eps)
      : mats_(matrices), share_(weights.size()), power_(weights.size(), 0.0), eps_(eps),
        group_(matrices[0].values.size(), 0) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (std::size_t k = 0; k < weights.size(); ++k) share_[k] = weights[k] / sum;
  }

  std::size_t elements() const { return group_.size(); }
  std::size_t groups() const { return power_.size(); }
  int group(std::size_t e) const { return group_[e]; }
  const std::vector<int>& assignment() const { return group_; }
  double power(std::size_t k) const { return power_[k]; }
  double share(std::size_t k) const { return share_[k]; }
  double deliver(std::size_t e, int g) const { return g == 0 ? 0.0 : mats_[static_cast<std::size_t>(g - 1)].values[e]; }

  void set(std::size_t e, int g) {
    if (group_[e] > 0) power_[static_cast<std::size_t>(group_[e] - 1)] -= deliver(e, group_[e]);
    group_[e] = g;
    if (g > 0) power_[static_cast<std::size_t>(g - 1)] += deliver(e, g);
  }

  Key key() const {
    double total = 0.0;
    for (double p : power_) total += p;
    return {std::max(0.0, deviation(power_, total) - eps_), total};
  }

  void clear() {
    std::fill(group_.begin(), group_.end(), 0);
    std::fill(power_.begin(), power_.end(), 0.0);
  }

  static double deviation(const std::vector<double>& power, double total, const std::vector<double>& share) {
    if (!(total > 0.0)) return 1.0;
    double dev = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) dev = std::max(dev, std::abs(power[k] / total - share[k]));
    return dev;
  }
  double deviation(const std::vector<double>& power, double total) const {
    return deviation(power, total, share_);
  }

 private:
  const std::vector<PowerMatrix>& mats_;
  std::vector<double> share_;
  std::vector<double> power_;
  double eps_;
  std::vector<int> group_;
};

void greedy(State& s, const std::vector<std::size_t>& order) {
  s.clear();
  double total = 0.0;
  for (std::size_t e : order) {
    int pick = 1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.groups(); ++k) {
      const double deficit = total > 0.0 ? s.share(k) - s.power(k) / total : s.share(k);
      if (deficit > best) {
        best = deficit;
        pick = static_cast<int>(k + 1);
      }
    }
    s.set(e, pick);
    total += s.deliver(e, pick);
  }
}

void local_search(State& s, const std::vector<std::size_t>& order) {
  const int m = static_cast<int>(s.groups());
  Key current = s.key();
  constexpr int kMaxPasses = 10000;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool improved = false;
    for (std::size_t e : order) {
      const int from = s.group(e);
      for (int g = 0; g <= m; ++g) {
        if (g == from) continue;
        s.set(e, g);
        const Key k = s.key();
        if (better(k, current)) {
          current = k;
          improved = true;
          break;
        }
        s.set(e, from);
      }
    }
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        const std::size_t ea = order[a], eb = order[b];
        const int ga = s.group(ea), gb = s.group(eb);
        if (ga == gb) continue;
        s.set(ea, gb);
        s.set(eb, ga);
        const Key k = s.key();
        if (better(k, current)) {
          current = k;
          improved = true;
        } else {
          s.set(ea, ga);
          s.set(eb, gb);
        }
      }
    }
    if (!improved) break;
  }
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Partition finish(Partition p) {
  if (!p.feasible()) {
    throw InfeasibleRatioError("no grouping meets the ratio tolerance; best deviation " +
                                   std::to_string(p.deviation),
                               std::move(p));
  }
  return p;
}

}  // namespace

Partition evaluate(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights,
                   const std::vector<int>& group, double ratio_tol) {
  if (matrices.empty() || matrices.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "need one power matrix per weight");
  }
  const std::size_t n = matrices[0].values.size();
  if (group.size() != n) throw Error(ErrorKind::InvalidArgument, "assignment size differs from the array");
  Partition p;
  p.rows = matrices[0].rows;
  p.cols = matrices[0].cols;
  p.group = group;
  p.ratio_tol = ratio_tol;
  p.group_power.assign(matrices.size(), 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    const int g = group[e];
    if (g < 0 || g > static_cast<int>(matrices.size())) {
      throw Error(ErrorKind::InvalidArgument, "group index out of range");
    }
    if (g > 0) p.group_power[static_cast<std::size_t>(g - 1)] += matrices[static_cast<std::size_t>(g - 1)].values[e];
  }
  for (double v : p.group_power) p.total += v;
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> share;
  for (double w : weights) share.push_back(w / sum);
  p.deviation = State::deviation(p.group_power, p.total, share);
  return p;
}

Partition optimize_grouping(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights,
                            const GroupingConfig& config) {
  check_inputs(matrices, weights, config.ratio_tol);
  if (config.restarts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one restart");
  const std::size_t n = matrices[0].values.size();

  std::vector<std::size_t> by_power(n);
  for (std::size_t e = 0; e < n; ++e) by_power[e] = e;
  auto best_deliver = [&](std::size_t e) {
    double b = 0.0;
    for (const auto& m : matrices) b = std::max(b, m.values[e]);
    return b;
  };
  std::stable_sort(by_power.begin(), by_power.end(),
                   [&](std::size_t a, std::size_t b) { return best_deliver(a) > best_deliver(b); });

  const std::size_t restarts = static_cast<std::size_t>(config.restarts);
  std::vector<std::vector<int>> results(restarts);
  std::vector<Key> keys(restarts);
  parallel_for(restarts, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      std::vector<std::size_t> order = by_power;
      if (r > 0) {
        std::mt19937_64 rng(restart_seed(config.seed, static_cast<int>(r)));
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
      }
      State s(matrices, weights, config.ratio_tol);
      greedy(s, order);
      local_search(s, order);
      results[r] = s.assignment();
      keys[r] = s.key();
    }
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (better(keys[r], keys[best])) best = r;
  return finish(evaluate(matrices, weights, results[best], config.ratio_tol));
}

Partition brute_force_grouping(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights,
                               double ratio_tol) {
  check_inputs(matrices, weights, ratio_tol);
  const std::size_t n = matrices[0].values.size();
  const int m = static_cast<int>(matrices.size());
  double count = 1.0;
  for (std::size_t e = 0; e < n; ++e) {
    count *= m + 1;
    if (count > 1e7) throw Error(ErrorKind::TooLarge, "exhaustive grouping exceeds 10^7 assignments");
  }
  State s(matrices, weights, ratio_tol);
  std::vector<int> best = s.assignment();
  Key best_key = s.key();
  while (true) {
    std::size_t e = 0;
    while (e < n && s.group(e) == m) {
      s.set(e, 0);
      ++e;
    }
    if (e == n) break;
    s.set(e, s.group(e) + 1);
    const Key k = s.key();
    if (better(k, best_key)) {
      best_key = k;
      best = s.assignment();
    }
  }
  return finish(evaluate(matrices, weights, best, ratio_tol));
}

std::vector<int> aim_assignment(const Partition& partition) {
  std::vector<int> out(partition.group.size());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = partition.group[e] - 1;
  return out;
}

FieldGrid compose_target_field(const SplitSpec& spec, const GridAxis& u, const GridAxis& v,
                               const ComposeOptions& options) {
  spec.validate();
  if (!(options.amplitude > 0.0)) throw Error(ErrorKind::InvalidArgument, "amplitude must be positive");
  const auto& ts = spec.targets;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i].radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "target regions need a radius");
    const double x = ts[i].center.x, y = ts[i].center.y, r = ts[i].radius;
    if (x - r < u.lower_edge() || x + r > u.upper_edge() || y - r < v.lower_edge() || y + r > v.upper_edge()) {
      throw Error(ErrorKind::RegionOutOfWindow, "region " + std::to_string(i + 1) + " leaves the focal window");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const double d = std::hypot(x - ts[j].center.x, y - ts[j].center.y);
      if (d < r + ts[j].radius) {
        throw Error(ErrorKind::OverlappingRegions,
                    "regions " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " overlap");
      }
    }
  }
  double kmax = 0.0;
  for (const auto& t : ts) kmax = std::max(kmax, t.weight);

  FieldGrid out(u, v);
  std::vector<std::vector<std::size_t>> members(ts.size());
  for (std::size_t iv = 0; iv < v.count; ++iv) {
    for (std::size_t iu = 0; iu < u.count; ++iu) {
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const double du = u.at(iu) - ts[i].center.x, dv = v.at(iv) - ts[i].center.y;
        if (du * du + dv * dv <= ts[i].radius * ts[i].radius) {
          members[i].push_back(iv * u.count + iu);
          break;
        }
      }
    }
  }
  if (options.energy && !(*options.energy > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "target energy must be positive");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (members[i].empty()) {
      throw Error(ErrorKind::RegionOutOfWindow, "region " + std::to_string(i + 1) + " covers no grid sample");
    }
    double a = options.amplitude * std::sqrt(ts[i].weight / kmax);
    if (options.exact_area) {
      const double exact = std::numbers::pi * ts[i].radius * ts[i].radius;
      const double discrete = static_cast<double>(members[i].size()) * u.spacing * v.spacing;
      a *= std::sqrt(exact / discrete);
    }
    for (std::size_t k : members[i]) out.values()[k] = a;
  }
  if (options.energy) {
    const double scale = std::sqrt(*options.energy / field_energy(out));
    for (auto& z : out.values()) z *= scale;
  }
  return out;
}

void write_partition(std::ostream& os, const Partition& partition) {
  os << "row,col,group\n";
  for (int r = 0; r < partition.rows; ++r)
    for (int c = 0; c < partition.cols; ++c)
      os << r << ',' << c << ',' << partition.group[static_cast<std::size_t>(r * partition.cols + c)] << '\n';
}

}  // namespace oirs::split
