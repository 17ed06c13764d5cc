#include "oirs/opa.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "oirs/csv.hpp"
#include "oirs/error.hpp"
#include "oirs/simd/kernels.hpp"

namespace oirs::opa {

using cplx = std::complex<double>;

double OpticalSetup::wave_number() const { return 2.0 * std::numbers::pi / wavelength; }

void OpticalSetup::validate() const {
  if (!(wavelength > 0.0) || !(focal_length > 0.0) || !std::isfinite(wavelength) ||
      !std::isfinite(focal_length)) {
    throw Error(ErrorKind::InvalidArgument, "wavelength and focal length must be positive");
  }
}

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

PhasedArray PhasedArray::uniform(std::size_t cols, std::size_t rows, double pitch, double active,
                                 double phase, double gap_phase) {
  PhasedArray a;
  a.cols = cols;
  a.rows = rows;
  a.pitch = pitch;
  a.active = active;
  a.gap_phase = gap_phase;
  a.phase.assign(cols * rows, wrap_phase(phase));
  a.validate();
  return a;
}

void PhasedArray::validate() const {
  if (cols == 0 || rows == 0) throw Error(ErrorKind::InvalidArgument, "phased array needs pixels");
  if (!(pitch > 0.0) || !(active > 0.0) || active > pitch * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 < active size ≤ pitch");
  }
  if (phase.size() != cols * rows) {
    throw Error(ErrorKind::InvalidArgument, "phase grid size differs from M×N");
  }
  for (double p : phase) {
    if (!std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "non-finite pixel phase");
  }
  if (!std::isfinite(gap_phase)) throw Error(ErrorKind::InvalidArgument, "non-finite gap phase");
}

std::pair<GridAxis, GridAxis> array_grid(const PhasedArray& array, std::size_t samples_per_pitch,
                                         std::size_t pad_factor) {
  if (samples_per_pitch == 0 || pad_factor == 0) {
    throw Error(ErrorKind::SamplingError, "samples per pitch and padding must be positive");
  }
  const double dx = array.pitch / static_cast<double>(samples_per_pitch);
  auto axis = [&](std::size_t pixels) {
    std::size_t n = pixels * samples_per_pitch * pad_factor;
    if (n % 2 != 0) n += 1;
    return GridAxis::centered_cells(n, dx);
  };
  return {axis(array.cols), axis(array.rows)};
}

FieldGrid gaussian_incident(const ma::GaussianBeam& beam, const GridAxis& x, const GridAxis& y) {
  beam.validate();
  FieldGrid out(x, y);
  for (std::size_t iy = 0; iy < y.count; ++iy)
    for (std::size_t ix = 0; ix < x.count; ++ix)
      out(ix, iy) = beam.field_amplitude(x.at(ix), y.at(iy));
  return out;
}

FieldGrid uniform_incident(const GridAxis& x, const GridAxis& y, double amplitude) {
  return FieldGrid(x, y, cplx(amplitude, 0.0));
}

GridAxis focal_axis(const GridAxis& near, const OpticalSetup& setup) {
  setup.validate();
  const double du = setup.wavelength * setup.focal_length / (static_cast<double>(near.count) * near.spacing);
  return GridAxis::centered_fft(near.count, du);
}

namespace {

// exp(−2πi·a·b/λf) factors along one axis for the discrete lens transform.
void axis_factors(const GridAxis& near, const GridAxis& focal, double lf,
                  std::vector<cplx>& pre, std::vector<cplx>& post) {
  const std::size_t n = near.count;
  pre.resize(n);
  post.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pre[i] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(i) * near.spacing * focal.first / lf);
    post[i] = std::polar(1.0, -2.0 * std::numbers::pi * near.first * focal.at(i) / lf);
  }
}

}  // namespace

Fraunhofer::Fraunhofer(const GridAxis& x, const GridAxis& y, const OpticalSetup& setup)
    : x_(x), y_(y), u_(focal_axis(x, setup)), v_(focal_axis(y, setup)), fft_(x.count, y.count) {
  const double lf = setup.wavelength * setup.focal_length;
  std::vector<cplx> pre_x, post_x, pre_y, post_y;
  axis_factors(x_, u_, lf, pre_x, post_x);
  axis_factors(y_, v_, lf, pre_y, post_y);
  const double scale = x_.spacing * y_.spacing / lf;
  const double n = static_cast<double>(x_.count * y_.count);
  const std::size_t total = x_.count * y_.count;
  pre_.resize(total);
  post_.resize(total);
  pre_inv_.resize(total);
  post_inv_.resize(total);
  for (std::size_t iy = 0; iy < y_.count; ++iy) {
    for (std::size_t ix = 0; ix < x_.count; ++ix) {
      const std::size_t k = iy * x_.count + ix;
      pre_[k] = pre_x[ix] * pre_y[iy];
      post_[k] = scale * post_x[ix] * post_y[iy];
      // Inverse: t = conj(pre)·IDFT(conj(post_unit)·T)/(scale·n).
      pre_inv_[k] = std::conj(post_x[ix] * post_y[iy]);
      post_inv_[k] = std::conj(pre_[k]) / (scale * n);
    }
  }
}

void Fraunhofer::forward_inplace(cplx* data) const {
  const auto& k = simd::kernels();
  k.multiply(data, pre_.data(), pre_.size());
  fft_.forward(data);
  k.multiply(data, post_.data(), post_.size());
}

void Fraunhofer::inverse_inplace(cplx* data) const {
  const auto& k = simd::kernels();
  k.multiply(data, pre_inv_.data(), pre_inv_.size());
  fft_.inverse(data);
  k.multiply(data, post_inv_.data(), post_inv_.size());
}

FieldGrid Fraunhofer::forward(const FieldGrid& near) const {
  if (!(near.x_axis() == x_) || !(near.y_axis() == y_)) {
    throw Error(ErrorKind::InvalidArgument, "field grid differs from the propagator's near grid");
  }
  FieldGrid out(u_, v_);
  out.values() = near.values();
  forward_inplace(out.data());
  return out;
}

FieldGrid Fraunhofer::inverse(const FieldGrid& focal) const {
  if (!(focal.x_axis() == u_) || !(focal.y_axis() == v_)) {
    throw Error(ErrorKind::InvalidArgument, "field grid differs from the propagator's focal grid");
  }
  FieldGrid out(x_, y_);
  out.values() = focal.values();
  inverse_inplace(out.data());
  return out;
}

FieldGrid fraunhofer(const FieldGrid& field, const OpticalSetup& setup) {
  return Fraunhofer(field.x_axis(), field.y_axis(), setup).forward(field);
}

FieldGrid inverse_fraunhofer(const FieldGrid& focal, const GridAxis& x, const GridAxis& y,
                             const OpticalSetup& setup) {
  return Fraunhofer(x, y, setup).inverse(focal);
}

namespace {

struct AxisRaster {
  std::vector<int> pixel;
  std::vector<double> active;
  std::size_t first = 0;
};

AxisRaster rasterize_axis(const GridAxis& axis, std::size_t pixels, double pitch, double active,
                          std::size_t per_pitch) {
  const double dx = axis.spacing;
  const double half = 0.5 * static_cast<double>(pixels) * pitch;
  // Pixel lattice edge −half must sit on a cell edge.
  const double offset = (-half - axis.lower_edge()) / dx;
  const double rounded = std::round(offset);
  if (std::abs(offset - rounded) > 1e-6 || rounded < 0.0 ||
      rounded + static_cast<double>(pixels * per_pitch) > static_cast<double>(axis.count) + 1e-9) {
    throw Error(ErrorKind::SamplingError,
                "pixel lattice does not align with the sample grid or exceeds it");
  }
  AxisRaster r;
  r.first = static_cast<std::size_t>(rounded);
  r.pixel.assign(axis.count, -1);
  r.active.assign(axis.count, 0.0);
  for (std::size_t m = 0; m < pixels; ++m) {
    const double centre = -half + (static_cast<double>(m) + 0.5) * pitch;
    const double a0 = centre - 0.5 * active, a1 = centre + 0.5 * active;
    for (std::size_t q = 0; q < per_pitch; ++q) {
      const std::size_t i = r.first + m * per_pitch + q;
      const double c0 = axis.at(i) - 0.5 * dx, c1 = c0 + dx;
      r.pixel[i] = static_cast<int>(m);
      double f = (std::min(c1, a1) - std::max(c0, a0)) / dx;
      // Edges that coincide up to rounding count as exact.
      if (f > 1.0 - 1e-9) f = 1.0;
      if (f < 1e-9) f = 0.0;
      r.active[i] = f;
    }
  }
  return r;
}

std::size_t pitch_samples(double pitch, double spacing) {
  const double ratio = pitch / spacing;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw Error(ErrorKind::SamplingError, "pixel pitch is not an integer multiple of the grid spacing");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

PixelRaster::PixelRaster(const PhasedArray& array, const GridAxis& x, const GridAxis& y) {
  array.validate();
  per_pitch_ = pitch_samples(array.pitch, x.spacing);
  if (pitch_samples(array.pitch, y.spacing) != per_pitch_) {
    throw Error(ErrorKind::SamplingError, "x and y sampling differ");
  }
  auto rx = rasterize_axis(x, array.cols, array.pitch, array.active, per_pitch_);
  auto ry = rasterize_axis(y, array.rows, array.pitch, array.active, per_pitch_);
  pix_x_ = std::move(rx.pixel);
  act_x_ = std::move(rx.active);
  first_x_ = rx.first;
  pix_y_ = std::move(ry.pixel);
  act_y_ = std::move(ry.active);
  first_y_ = ry.first;
}

namespace {

enum class Part { total, active, gap };

FieldGrid reflectance(const PhasedArray& array, const FieldGrid& incident, Part part) {
  const PixelRaster raster(array, incident.x_axis(), incident.y_axis());
  std::vector<cplx> pixel_phasor(array.phase.size());
  for (std::size_t k = 0; k < pixel_phasor.size(); ++k) pixel_phasor[k] = std::polar(1.0, array.phase[k]);
  const cplx gap_phasor = std::polar(1.0, array.gap_phase);
  FieldGrid out(incident.x_axis(), incident.y_axis());
  for (std::size_t iy = 0; iy < raster.ny(); ++iy) {
    const int n = raster.pixel_y(iy);
    if (n < 0) continue;
    for (std::size_t ix = 0; ix < raster.nx(); ++ix) {
      const int m = raster.pixel_x(ix);
      if (m < 0) continue;
      const double a = raster.active(ix, iy);
      const cplx act = a * pixel_phasor[static_cast<std::size_t>(n) * array.cols + static_cast<std::size_t>(m)];
      const cplx gap = (1.0 - a) * gap_phasor;
      const cplx mix = part == Part::total ? act + gap : (part == Part::active ? act : gap);
      out(ix, iy) = incident(ix, iy) * mix;
    }
  }
  return out;
}

}  // namespace

FieldGrid build_reflectance(const PhasedArray& array, const FieldGrid& incident) {
  return reflectance(array, incident, Part::total);
}

FieldGrid gap_reflectance(const PhasedArray& array, const FieldGrid& incident) {
  return reflectance(array, incident, Part::gap);
}

FieldGrid active_reflectance(const PhasedArray& array, const FieldGrid& incident) {
  return reflectance(array, incident, Part::active);
}

FieldGrid non_adjustable_field(const PhasedArray& array, const FieldGrid& incident,
                               const OpticalSetup& setup) {
  return fraunhofer(gap_reflectance(array, incident), setup);
}

double opa_efficiency(const PhasedArray& array, const FieldGrid& incident, const OpticalSetup& setup) {
  const Fraunhofer lens(incident.x_axis(), incident.y_axis(), setup);
  const FieldGrid total = lens.forward(build_reflectance(array, incident));
  FieldGrid adjustable = lens.forward(gap_reflectance(array, incident));
  for (std::size_t i = 0; i < adjustable.size(); ++i) {
    adjustable.values()[i] = total.values()[i] - adjustable.values()[i];
  }
  const double denom = field_energy(total);
  if (!(denom > 0.0)) throw Error(ErrorKind::InvalidArgument, "incident field carries no energy");
  return field_energy(adjustable) / denom;
}

double steerable_energy(const PhasedArray& array, const FieldGrid& incident, const OpticalSetup& setup) {
  const PixelRaster raster(array, incident.x_axis(), incident.y_axis());
  double energy = 0.0;
  for (std::size_t iy = 0; iy < raster.ny(); ++iy)
    for (std::size_t ix = 0; ix < raster.nx(); ++ix)
      if (raster.inside(ix, iy)) energy += std::norm(incident(ix, iy));
  return energy * incident.cell_area() * opa_efficiency(array, incident, setup);
}

double sampled_gap_fraction(const PhasedArray& array, const GridAxis& x, const GridAxis& y) {
  const PixelRaster raster(array, x, y);
  double gap = 0.0, total = 0.0;
  for (std::size_t iy = 0; iy < raster.ny(); ++iy)
    for (std::size_t ix = 0; ix < raster.nx(); ++ix)
      if (raster.inside(ix, iy)) {
        total += 1.0;
        gap += 1.0 - raster.active(ix, iy);
      }
  return gap / total;
}

double amplitude_correlation(const FieldGrid& a, const FieldGrid& b,
                             const std::vector<unsigned char>& window) {
  if (a.size() != b.size() || window.size() != a.size()) {
    throw Error(ErrorKind::InvalidArgument, "correlation inputs differ in size");
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!window[i]) continue;
    const double x = std::abs(a.values()[i]), y = std::abs(b.values()[i]);
    ab += x * y;
    aa += x * x;
    bb += y * y;
  }
  if (!(aa > 0.0) || !(bb > 0.0)) return 0.0;
  return ab / std::sqrt(aa * bb);
}

namespace {

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::IoError, "malformed number '" + std::string(s) + "' in phase mask");
  }
  return v;
}

}  // namespace

void write_phase_mask(std::ostream& os, const PhasedArray& array,
                      const std::vector<std::string>& comments) {
  array.validate();
  os << "# opa-phase v1 " << array.cols << ' ' << array.rows << ' ' << csv::format(array.pitch)
     << ' ' << csv::format(array.active) << '\n';
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t n = 0; n < array.rows; ++n) {
    for (std::size_t m = 0; m < array.cols; ++m) {
      if (m) os << ',';
      os << csv::format(array.at(m, n));
    }
    os << '\n';
  }
}

PhasedArray read_phase_mask(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::IoError, "empty phase mask");
  std::istringstream header(line);
  std::string hash, tag, version, pitch_s, active_s;
  PhasedArray a;
  if (!(header >> hash >> tag >> version >> a.cols >> a.rows >> pitch_s >> active_s) || hash != "#" ||
      tag != "opa-phase" || version != "v1") {
    throw Error(ErrorKind::IoError, "missing '# opa-phase v1 M N pitch_m d_m' header");
  }
  a.pitch = parse_double(pitch_s);
  a.active = parse_double(active_s);
  a.phase.reserve(a.cols * a.rows);
  std::size_t rows_read = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::string_view rest(line);
    std::size_t count = 0;
    while (true) {
      const auto comma = rest.find(',');
      a.phase.push_back(parse_double(rest.substr(0, comma)));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (count != a.cols) throw Error(ErrorKind::IoError, "phase mask row has the wrong length");
    ++rows_read;
  }
  if (rows_read != a.rows) throw Error(ErrorKind::IoError, "phase mask has the wrong number of rows");
  a.validate();
  return a;
}

}  // namespace oirs::opa
