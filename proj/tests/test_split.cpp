#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oirs/error.hpp"
#include "oirs/split.hpp"

using namespace oirs;
using namespace oirs::split;

namespace {

std::vector<PowerMatrix> uniform_matrices(int rows, int cols, int m, double value) {
  return std::vector<PowerMatrix>(static_cast<std::size_t>(m),
                                  PowerMatrix{rows, cols, std::vector<double>(static_cast<std::size_t>(rows * cols), value)});
}

std::vector<PowerMatrix> random_matrices(int rows, int cols, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.2, 1.0);
  std::vector<PowerMatrix> out;
  for (int k = 0; k < m; ++k) {
    PowerMatrix p{rows, cols, {}};
    for (int e = 0; e < rows * cols; ++e) p.values.push_back(d(rng));
    out.push_back(p);
  }
  return out;
}

// Recomputes a partition from scratch, independent of the library.
void check_consistent(const Partition& p, const std::vector<PowerMatrix>& mats, const std::vector<double>& w) {
  std::vector<double> P(mats.size(), 0.0);
  for (std::size_t e = 0; e < p.group.size(); ++e) {
    REQUIRE(p.group[e] >= 0);
    REQUIRE(p.group[e] <= static_cast<int>(mats.size()));
    if (p.group[e] > 0) P[static_cast<std::size_t>(p.group[e] - 1)] += mats[static_cast<std::size_t>(p.group[e] - 1)].values[e];
  }
  double total = 0.0, ws = 0.0;
  for (double v : P) total += v;
  for (double v : w) ws += v;
  double dev = 0.0;
  for (std::size_t k = 0; k < P.size(); ++k) {
    CHECK(p.group_power[k] == doctest::Approx(P[k]).epsilon(1e-12));
    dev = std::max(dev, std::abs(P[k] / total - w[k] / ws));
  }
  CHECK(p.total == doctest::Approx(total).epsilon(1e-12));
  CHECK(p.deviation == doctest::Approx(dev).epsilon(1e-9).scale(1e-12));
}

}  // namespace

TEST_CASE("power matrices") {
  ma::GaussianBeam beam;
  beam.waist = 0.05;
  const ma::MirrorArray one(1, 1, 0.02, 0.0);
  const auto m = power_matrices(one, beam, SplitSpec{{{{0, 0, 5}, 1.0, 0.0}}});
  CHECK(m[0].values[0] == doctest::Approx(ma::incident_powers(one, beam)[0]).epsilon(1e-15));

  const ma::MirrorArray a(3, 4, 0.02, 0.002);
  const auto sym = power_matrices(a, beam, SplitSpec{{{{0.05, 0, 0.3}, 1.0, 0.0}, {{-0.05, 0, 0.3}, 1.0, 0.0}}});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) CHECK(sym[0](r, c) == doctest::Approx(sym[1](r, 3 - c)).epsilon(1e-12));

  const ma::MirrorArray exp4(4, 4, 0.04, 0.005);
  SplitSpec three{{{{0.02, 0.03, 0.25}, 1, 0}, {{-0.03, -0.04, 0.25}, 2, 0}, {{-0.04, 0.03, 0.25}, 3, 0}}};
  const auto mats = power_matrices(exp4, beam, three);
  const auto inc = ma::incident_powers(exp4, beam);
  REQUIRE(mats.size() == 3);
  for (const auto& mm : mats)
    for (std::size_t e = 0; e < inc.size(); ++e) {
      CHECK(mm.values[e] <= inc[e]);
      CHECK(mm.values[e] > 0.0);
    }
}

TEST_CASE("single group takes every element") {
  const auto mats = random_matrices(3, 3, 1, 4);
  const auto p = optimize_grouping(mats, {1.0});
  double all = 0.0;
  for (double v : mats[0].values) all += v;
  CHECK(p.total == doctest::Approx(all).epsilon(1e-14));
  for (int g : p.group) CHECK(g == 1);
}

TEST_CASE("2x2 equal powers split evenly and match the oracle") {
  const auto mats = uniform_matrices(2, 2, 2, 0.25);
  const auto h = optimize_grouping(mats, {1.0, 1.0});
  const auto o = brute_force_grouping(mats, {1.0, 1.0});
  CHECK(h.group_power[0] == h.group_power[1]);
  CHECK(h.total == doctest::Approx(1.0));
  CHECK(o.total == doctest::Approx(h.total).epsilon(1e-14));
  CHECK(o.deviation == h.deviation);
}

TEST_CASE("heuristic reaches 98% of the exhaustive optimum on seeded 3x3 instances") {
  for (std::uint64_t s = 1; s <= 25; ++s) {
    const auto mats = random_matrices(3, 3, 2, s);
    const std::vector<double> w{1.0, 2.0};
    GroupingConfig cfg;
    cfg.seed = s;
    const auto h = optimize_grouping(mats, w, cfg);
    const auto o = brute_force_grouping(mats, w, cfg.ratio_tol);
    check_consistent(h, mats, w);
    check_consistent(o, mats, w);
    CHECK(h.total <= o.total * (1.0 + 1e-12));
    CHECK(h.total >= 0.98 * o.total);
    CHECK(h.deviation <= 0.05);
    CHECK(o.deviation <= 0.05);
  }
}

TEST_CASE("relaxing the tolerance never lowers the exhaustive optimum") {
  const auto mats = random_matrices(2, 3, 2, 77);
  double last = 0.0;
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.4, 0.49}) {
    try {
      const auto o = brute_force_grouping(mats, {1.0, 1.0}, eps);
      CHECK(o.total >= last);
      last = o.total;
    } catch (const InfeasibleRatioError&) {
      CHECK(last == 0.0);
    }
  }
}

TEST_CASE("infeasible and oversized instances") {
  const auto one = uniform_matrices(1, 1, 2, 1.0);
  try {
    brute_force_grouping(one, {1.0, 1.0}, 0.2);
    FAIL("expected InfeasibleRatio");
  } catch (const InfeasibleRatioError& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleRatio);
    CHECK(e.best().group.size() == 1);
  }
  CHECK_THROWS_AS(optimize_grouping(one, {1.0, 1.0}), InfeasibleRatioError);
  try {
    brute_force_grouping(uniform_matrices(4, 4, 3, 1.0), {1, 2, 3});
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
  CHECK_THROWS_AS(optimize_grouping(one, {1.0}, GroupingConfig{0.6}), Error);
  CHECK_THROWS_AS(optimize_grouping(one, {1.0, -1.0}), Error);
}

TEST_CASE("grouping is deterministic and independent of thread count") {
  const auto mats = random_matrices(4, 4, 3, 12);
  GroupingConfig a;
  a.seed = 42;
  GroupingConfig b = a;
  b.threads = 4;
  const auto pa = optimize_grouping(mats, {1, 2, 3}, a);
  const auto pb = optimize_grouping(mats, {1, 2, 3}, b);
  CHECK(pa.group == pb.group);
  CHECK(pa.deviation <= 0.05);
}

TEST_CASE("partition CSV and aim assignment") {
  const auto mats = uniform_matrices(1, 2, 2, 1.0);
  const auto p = evaluate(mats, {1, 1}, {2, 0}, 0.05);
  std::ostringstream os;
  write_partition(os, p);
  CHECK(os.str() == "row,col,group\n0,0,2\n0,1,0\n");
  CHECK(aim_assignment(p) == std::vector<int>{1, -1});
}

TEST_CASE("composed target fields") {
  const auto u = GridAxis::centered_fft(256, 1e-3), v = u;
  const auto single = compose_target_field(SplitSpec{{{{0, 0, 0}, 1.0, 0.02}}}, u, v, {1.0, false});
  double mx = 0.0;
  for (auto z : single.values()) mx = std::max(mx, std::abs(z));
  CHECK(mx == 1.0);

  auto region_power = [&](const FieldGrid& f, double cx, double cy, double r) {
    double p = 0.0;
    for (std::size_t iv = 0; iv < v.count; ++iv)
      for (std::size_t iu = 0; iu < u.count; ++iu) {
        const double du = u.at(iu) - cx, dv = v.at(iv) - cy;
        if (du * du + dv * dv <= r * r) p += std::norm(f(iu, iv)) * f.cell_area();
      }
    return p;
  };

  SplitSpec two{{{{-0.04, 0, 0}, 1.0, 0.015}, {{0.04, 0, 0}, 4.0, 0.015}}};
  const auto raw = compose_target_field(two, u, v, {1.0, false});
  CHECK(std::abs(raw(u.count / 2 + 40, v.count / 2)) == doctest::Approx(2.0 * std::abs(raw(u.count / 2 - 40, v.count / 2))));
  const double ratio = region_power(raw, 0.04, 0, 0.015) / region_power(raw, -0.04, 0, 0.015);
  CHECK(std::abs(ratio / 4.0 - 1.0) <= 0.01);

  SplitSpec three{{{{0.02, 0.03, 0}, 1, 0.01}, {{-0.03, -0.04, 0}, 2, 0.01}, {{-0.04, 0.03, 0}, 3, 0.01}}};
  const auto f = compose_target_field(three, u, v);
  const double p1 = region_power(f, 0.02, 0.03, 0.01), p2 = region_power(f, -0.03, -0.04, 0.01),
               p3 = region_power(f, -0.04, 0.03, 0.01);
  CHECK(std::abs(p2 / p1 / 2.0 - 1.0) <= 0.01);
  CHECK(std::abs(p3 / p1 / 3.0 - 1.0) <= 0.01);
  const double area = std::numbers::pi * 1e-4;
  CHECK(field_energy(f) == doctest::Approx((1.0 / 3 + 2.0 / 3 + 1.0) * area).epsilon(1e-9));

  split::ComposeOptions budget;
  budget.energy = 2.5e-3;
  CHECK(field_energy(compose_target_field(three, u, v, budget)) == doctest::Approx(2.5e-3).epsilon(1e-12));

  try {
    compose_target_field(SplitSpec{{{{0, 0, 0}, 1, 0.02}, {{0.03, 0, 0}, 1, 0.02}}}, u, v);
    FAIL("expected OverlappingRegions");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OverlappingRegions);
  }
  try {
    compose_target_field(SplitSpec{{{{0.12, 0, 0}, 1, 0.02}}}, u, v);
    FAIL("expected RegionOutOfWindow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RegionOutOfWindow);
  }
}
