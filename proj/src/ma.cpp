#include "oirs/ma.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oirs/error.hpp"
#include "oirs/parallel.hpp"
#include "oirs/quadrature.hpp"
#include "oirs/simd/kernels.hpp"

namespace oirs::ma {

namespace {

// exp(−2·81) ≈ 7e−71: beyond 9 waists the density is zero in double precision
// relative to the peak.
constexpr double kSupportWaists = 9.0;

std::string element_label(int row, int col) {
  return "element (" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

void GaussianBeam::validate() const {
  if (!(amplitude > 0.0) || !(waist > 0.0) || !(kappa > 0.0) || !std::isfinite(amplitude) ||
      !std::isfinite(waist) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::InvalidArgument, "beam amplitude, waist and kappa must be positive");
  }
  if (!geom::is_finite(center) || !(geom::norm(direction) > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beam centre must be finite and direction nonzero");
  }
}

double GaussianBeam::total_power() const {
  return std::numbers::pi * kappa * amplitude * amplitude / 2.0;
}

double GaussianBeam::peak_density() const {
  return kappa * amplitude * amplitude / (waist * waist);
}

double GaussianBeam::density(double x, double y) const {
  const double dx = x - center.x, dy = y - center.y;
  return peak_density() * std::exp(-2.0 * (dx * dx + dy * dy) / (waist * waist));
}

double GaussianBeam::field_amplitude(double x, double y) const {
  const double dx = x - center.x, dy = y - center.y;
  return std::sqrt(kappa) * amplitude / waist * std::exp(-(dx * dx + dy * dy) / (waist * waist));
}

MirrorArray::MirrorArray(int rows, int cols, double side, double gap, geom::Vec3 origin,
                         geom::UnitVec3 normal)
    : rows_(rows), cols_(cols), side_(side), gap_(gap) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::InvalidArgument, "array needs at least 1×1 elements");
  if (!(side > 0.0) || !(gap >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "element side must be positive and gap non-negative");
  }
  elements_.reserve(static_cast<std::size_t>(rows) * cols);
  const double p = side + gap;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const geom::Vec3 c{origin.x + (j - 0.5 * (cols - 1)) * p,
                         origin.y + (i - 0.5 * (rows - 1)) * p, origin.z};
      elements_.push_back({c, side, normal, i, j});
    }
  }
}

AimSolution aim_elements(const MirrorArray& array, const GaussianBeam& beam,
                         const std::vector<geom::Vec3>& targets,
                         const std::vector<int>& assignment) {
  if (assignment.size() != array.size()) {
    throw Error(ErrorKind::LayoutMismatch, "assignment size differs from array size");
  }
  AimSolution out;
  out.targets = targets;
  out.elements.reserve(array.size());
  for (std::size_t e = 0; e < array.size(); ++e) {
    const MirrorElement& el = array.elements()[e];
    const int t = assignment[e];
    if (t < 0) {
      out.elements.push_back({geom::RotationMatrix::identity(), el.initial_normal, 0.0, -1});
      continue;
    }
    if (static_cast<std::size_t>(t) >= targets.size()) {
      throw Error(ErrorKind::InvalidArgument, "assignment refers to a missing target");
    }
    const geom::Vec3& r = targets[static_cast<std::size_t>(t)];
    const geom::Vec3& h = el.initial_normal.vec();
    if (std::abs(geom::dot(r - el.center, h)) < 1e-15) {
      throw GeometryError(ErrorKind::DegenerateGeometry,
                          "target lies in the plane of " + element_label(el.row, el.col), el.row,
                          el.col, t);
    }
    try {
      const geom::UnitVec3 normal = geom::deflected_normal(el.center, beam.direction, r);
      out.elements.push_back({geom::align_rotation(el.initial_normal, normal), normal,
                              geom::deflection_angle(el.initial_normal, normal), t});
    } catch (const GeometryError& err) {
      throw GeometryError(err.kind(), std::string(err.what()) + " at " + element_label(el.row, el.col),
                          el.row, el.col, t);
    }
  }
  return out;
}

AimSolution aim_array(const MirrorArray& array, const GaussianBeam& beam, const geom::Vec3& target) {
  return aim_elements(array, beam, {target}, std::vector<int>(array.size(), 0));
}

double element_incident_power(const GaussianBeam& beam, const MirrorElement& element,
                              double rel_tol) {
  beam.validate();
  const double reach = kSupportWaists * beam.waist;
  const double h = 0.5 * element.side;
  const double x0 = std::max(element.center.x - h, beam.center.x - reach);
  const double x1 = std::min(element.center.x + h, beam.center.x + reach);
  const double y0 = std::max(element.center.y - h, beam.center.y - reach);
  const double y1 = std::min(element.center.y + h, beam.center.y + reach);
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;
  return quad::integrate_rect([&](double x, double y) { return beam.density(x, y); }, x0, x1, y0,
                              y1, {rel_tol});
}

double disk_incident_power(const GaussianBeam& beam, double cx, double cy, double radius,
                           double rel_tol) {
  beam.validate();
  return quad::integrate_disk([&](double x, double y) { return beam.density(x, y); }, cx, cy,
                              radius, {rel_tol});
}

double reflected_power(double incident, double theta) {
  if (!(theta >= 0.0) || theta > std::numbers::pi / 2.0 + 1e-15) {
    throw Error(ErrorKind::InvalidArgument, "deflection angle outside [0, π/2]");
  }
  return incident * std::cos(theta);
}

std::vector<double> incident_powers(const MirrorArray& array, const GaussianBeam& beam) {
  std::vector<double> out;
  out.reserve(array.size());
  for (const auto& el : array.elements()) out.push_back(element_incident_power(beam, el));
  return out;
}

namespace {

struct Contribution {
  double ex;  // element centre relative to beam centre
  double ey;
  double weight;  // cosθ
};

std::vector<Contribution> contributions(const MirrorArray& array, const GaussianBeam& beam,
                                        const AimSolution& aim, int target) {
  if (aim.elements.empty()) throw Error(ErrorKind::EmptyAim, "aim solution has no elements");
  if (aim.elements.size() != array.size()) {
    throw Error(ErrorKind::LayoutMismatch, "aim solution does not cover every element");
  }
  std::vector<Contribution> out;
  for (std::size_t e = 0; e < array.size(); ++e) {
    const ElementAim& a = aim.elements[e];
    if (a.target < 0 || (target >= 0 && a.target != target)) continue;
    const geom::Vec3& c = array.elements()[e].center;
    out.push_back({c.x - beam.center.x, c.y - beam.center.y, std::cos(a.theta)});
  }
  return out;
}

double half_or_default(const std::optional<double>& v, double fallback) {
  const double h = v.value_or(fallback);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "spot half-size must be positive");
  return h;
}

}  // namespace

PowerDensityMap receiver_power_density(const MirrorArray& array, const GaussianBeam& beam,
                                       const AimSolution& aim, const MapOptions& opts) {
  beam.validate();
  const auto terms = contributions(array, beam, aim, opts.target);
  const double half_x = half_or_default(opts.spot_half_x, 0.5 * array.side());
  const double half_y = half_or_default(opts.spot_half_y, 0.5 * array.side());
  const double wx = opts.window_x > 0.0 ? opts.window_x : 3.0 * half_x;
  const double wy = opts.window_y > 0.0 ? opts.window_y : 3.0 * half_y;
  PowerDensityMap map(GridAxis::centered_cells(opts.nx, wx / static_cast<double>(opts.nx)),
                      GridAxis::centered_cells(opts.ny, wy / static_cast<double>(opts.ny)));

  const double inv_w2 = 1.0 / (beam.waist * beam.waist);
  const std::size_t nx = map.nx();
  // exp(−2(x + x_e)²/ω²) per element, reused by every row.
  std::vector<double> gx(terms.size() * nx);
  std::vector<double> inside_x(nx);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double x = map.x_axis().at(ix);
    inside_x[ix] = std::abs(x) <= half_x ? 1.0 : 0.0;
    for (std::size_t e = 0; e < terms.size(); ++e) {
      const double u = x + terms[e].ex;
      gx[e * nx + ix] = std::exp(-2.0 * u * u * inv_w2);
    }
  }

  const double peak = beam.peak_density();
  const auto& k = simd::kernels();
  parallel_for(map.ny(), opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t iy = begin; iy < end; ++iy) {
      const double y = map.y_axis().at(iy);
      auto row = map.row(iy);
      if (std::abs(y) > half_y) continue;
      for (std::size_t e = 0; e < terms.size(); ++e) {
        const double v = y + terms[e].ey;
        const double a = terms[e].weight * std::exp(-2.0 * v * v * inv_w2);
        k.axpy(a, gx.data() + e * nx, row.data(), nx);
      }
      for (std::size_t ix = 0; ix < nx; ++ix) row[ix] *= peak * inside_x[ix];
    }
  });
  return map;
}

double receiver_density_at(const MirrorArray& array, const GaussianBeam& beam,
                           const AimSolution& aim, double x, double y, const MapOptions& opts) {
  beam.validate();
  const auto terms = contributions(array, beam, aim, opts.target);
  const double half_x = half_or_default(opts.spot_half_x, 0.5 * array.side());
  const double half_y = half_or_default(opts.spot_half_y, 0.5 * array.side());
  if (std::abs(x) > half_x || std::abs(y) > half_y) return 0.0;
  const double inv_w2 = 1.0 / (beam.waist * beam.waist);
  double sum = 0.0;
  for (const auto& t : terms) {
    const double u = x + t.ex, v = y + t.ey;
    sum += t.weight * std::exp(-2.0 * (u * u + v * v) * inv_w2);
  }
  return beam.peak_density() * sum;
}

int RingLayout::ring_count() const {
  int k = 0;
  for (int r : region) k = std::max(k, r);
  return k;
}

RingLayout make_ring_layout(const MirrorArray& array, const GaussianBeam& beam, double ring_width) {
  if (!(ring_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "ring width must be positive");
  RingLayout layout{ring_width, {}};
  layout.region.reserve(array.size());
  for (const auto& el : array.elements()) {
    const double r = std::max(std::abs(el.center.x - beam.center.x), std::abs(el.center.y - beam.center.y));
    layout.region.push_back(std::max(1, static_cast<int>(std::ceil(r / ring_width - 1e-12))));
  }
  return layout;
}

double efficiency_ring_estimate(const RingLayout& layout, const GaussianBeam& beam,
                                const AimSolution& aim) {
  beam.validate();
  if (layout.region.size() != aim.elements.size()) {
    throw Error(ErrorKind::LayoutMismatch, "ring layout and aim cover different element counts");
  }
  if (!(layout.ring_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "ring width must be positive");
  const double a = layout.ring_width * layout.ring_width / (beam.waist * beam.waist);
  double eta = 0.0;
  for (std::size_t e = 0; e < aim.elements.size(); ++e) {
    const int k = layout.region[e];
    if (k < 1) {
      throw Error(ErrorKind::LayoutMismatch, "element " + std::to_string(e) + " has no ring region");
    }
    const double kk = static_cast<double>(k);
    const double share = (std::exp(-2.0 * (kk - 1.0) * (kk - 1.0) * a) - std::exp(-2.0 * kk * kk * a)) /
                         (4.0 * kk * kk);
    eta += share * std::cos(aim.elements[e].theta);
  }
  return eta;
}

double efficiency_numeric(const MirrorArray& array, const GaussianBeam& beam,
                          const AimSolution& aim) {
  beam.validate();
  if (aim.elements.size() != array.size()) {
    throw Error(ErrorKind::LayoutMismatch, "aim solution does not cover every element");
  }
  double sum = 0.0;
  for (std::size_t e = 0; e < array.size(); ++e) {
    if (aim.elements[e].target < 0) continue;
    sum += reflected_power(element_incident_power(beam, array.elements()[e]), aim.elements[e].theta);
  }
  return sum / beam.total_power();
}

}  // namespace oirs::ma
