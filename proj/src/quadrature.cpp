#include "oirs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "oirs/error.hpp"

namespace oirs::quad {

namespace {

constexpr int kOrder = 10;
constexpr int kInitialSplit = 4;
constexpr std::size_t kMaxCells = 1 << 18;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Gauss–Legendre nodes on [−1, 1] by Newton iteration on P_n.
Rule make_rule() {
  Rule rule;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kOrder; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

double tensor_estimate(const Integrand& f, double x0, double x1, double y0, double y1) {
  const Rule& r = rule();
  const double hx = 0.5 * (x1 - x0), cx = 0.5 * (x1 + x0);
  const double hy = 0.5 * (y1 - y0), cy = 0.5 * (y1 + y0);
  double sum = 0.0;
  for (int j = 0; j < kOrder; ++j) {
    const double y = cy + hy * r.nodes[j];
    double row = 0.0;
    for (int i = 0; i < kOrder; ++i) row += r.weights[i] * f(cx + hx * r.nodes[i], y);
    sum += r.weights[j] * row;
  }
  return sum * hx * hy;
}

// A cell carries its refined value (sum over its four quadrants) and the
// disagreement with the single-rule value as an error indicator.
struct Cell {
  double x0, x1, y0, y1;
  double value;
  double error;
  std::size_t id;
};

struct ByError {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;
  }
};

Cell make_cell(const Integrand& f, double x0, double x1, double y0, double y1, double whole,
               std::size_t id) {
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  const double split = (tensor_estimate(f, x0, xm, y0, ym) + tensor_estimate(f, xm, x1, y0, ym)) +
                       (tensor_estimate(f, x0, xm, ym, y1) + tensor_estimate(f, xm, x1, ym, y1));
  return {x0, x1, y0, y1, split, std::abs(split - whole), id};
}

}  // namespace

double integrate_rect(const Integrand& f, double x0, double x1, double y0, double y1,
                      const Options& opts) {
  if (!(opts.rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");
  if (x0 == x1 || y0 == y1) return 0.0;

  std::priority_queue<Cell, std::vector<Cell>, ByError> heap;
  std::vector<Cell> settled;
  std::size_t next_id = 0;
  double total = 0.0, total_error = 0.0;

  const double hx = (x1 - x0) / kInitialSplit, hy = (y1 - y0) / kInitialSplit;
  for (int j = 0; j < kInitialSplit; ++j) {
    for (int i = 0; i < kInitialSplit; ++i) {
      const double a0 = x0 + i * hx, a1 = i + 1 == kInitialSplit ? x1 : x0 + (i + 1) * hx;
      const double b0 = y0 + j * hy, b1 = j + 1 == kInitialSplit ? y1 : y0 + (j + 1) * hy;
      Cell c = make_cell(f, a0, a1, b0, b1, tensor_estimate(f, a0, a1, b0, b1), next_id++);
      total += c.value;
      total_error += c.error;
      heap.push(c);
    }
  }

  const double max_area_depth = std::ldexp(1.0, -2 * opts.max_depth);
  const double domain_area = std::abs((x1 - x0) * (y1 - y0));
  while (!heap.empty() && total_error > opts.rel_tol * std::abs(total) &&
         heap.size() + settled.size() < kMaxCells) {
    Cell c = heap.top();
    heap.pop();
    if (std::abs((c.x1 - c.x0) * (c.y1 - c.y0)) <= max_area_depth * domain_area) {
      settled.push_back(c);
      total_error -= c.error;
      continue;
    }
    total -= c.value;
    total_error -= c.error;
    const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
    const double quads[4][4] = {
        {c.x0, xm, c.y0, ym}, {xm, c.x1, c.y0, ym}, {c.x0, xm, ym, c.y1}, {xm, c.x1, ym, c.y1}};
    for (const auto& q : quads) {
      Cell child = make_cell(f, q[0], q[1], q[2], q[3], tensor_estimate(f, q[0], q[1], q[2], q[3]),
                             next_id++);
      total += child.value;
      total_error += child.error;
      heap.push(child);
    }
  }

  // Final sum in cell-id order so the result does not depend on heap layout.
  std::vector<Cell> cells = std::move(settled);
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
  double sum = 0.0;
  for (const Cell& c : cells) sum += c.value;
  return sum;
}

double integrate_disk(const Integrand& f, double cx, double cy, double radius,
                      const Options& opts) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::InvalidArgument, "disk radius must be non-negative");
  const Integrand polar = [&](double r, double phi) {
    return f(cx + r * std::cos(phi), cy + r * std::sin(phi)) * r;
  };
  return integrate_rect(polar, 0.0, radius, 0.0, 2.0 * std::numbers::pi, opts);
}

}  // namespace oirs::quad
