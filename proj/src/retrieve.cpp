#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oirs/error.hpp"
#include "oirs/opa.hpp"
#include "oirs/simd/kernels.hpp"

namespace oirs::opa {

using cplx = std::complex<double>;

namespace {

double quantize(double phi, int levels) {
  if (levels <= 0) return phi;
  const double step = 2.0 * std::numbers::pi / levels;
  return wrap_phase(std::round(phi / step) * step);
}

// Forward model split into a phase-independent active weight and the fixed gap field.
struct NearModel {
  std::vector<cplx> base;  // incident × α
  std::vector<cplx> gap;   // incident × (1 − α)·e^{iφ_c}
  std::vector<double> alpha;
  std::vector<int> pixel;  // pixel index per sample, −1 outside
};

NearModel make_model(const PhasedArray& array, const FieldGrid& incident, const PixelRaster& raster) {
  NearModel m;
  const std::size_t n = incident.size();
  m.base.assign(n, cplx{});
  m.gap.assign(n, cplx{});
  m.alpha.assign(n, 0.0);
  m.pixel.assign(n, -1);
  const cplx gap_phasor = std::polar(1.0, array.gap_phase);
  for (std::size_t iy = 0; iy < raster.ny(); ++iy) {
    for (std::size_t ix = 0; ix < raster.nx(); ++ix) {
      if (!raster.inside(ix, iy)) continue;
      const std::size_t k = iy * raster.nx() + ix;
      const double a = raster.active(ix, iy);
      m.alpha[k] = a;
      m.base[k] = incident.values()[k] * a;
      m.gap[k] = incident.values()[k] * (1.0 - a) * gap_phasor;
      m.pixel[k] = raster.pixel_y(iy) * static_cast<int>(array.cols) + raster.pixel_x(ix);
    }
  }
  return m;
}

void synthesize(const NearModel& m, const std::vector<double>& phase, std::vector<cplx>& out) {
  std::vector<cplx> phasor(phase.size());
  for (std::size_t p = 0; p < phase.size(); ++p) phasor[p] = std::polar(1.0, phase[p]);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = m.pixel[k] < 0 ? cplx{} : m.base[k] * phasor[static_cast<std::size_t>(m.pixel[k])] + m.gap[k];
  }
}

}  // namespace

RetrievalReport retrieve_phase(const FieldGrid& target, const PhasedArray& array,
                               const FieldGrid& incident, const OpticalSetup& setup,
                               const RetrievalConfig& config) {
  setup.validate();
  array.validate();
  if (config.max_iters < 0 || config.patience < 1 || !(config.tol >= 0.0) ||
      config.quantization_levels < 0 || config.zero_order_radius < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "invalid retrieval settings");
  }
  const Fraunhofer lens(incident.x_axis(), incident.y_axis(), setup);
  if (!(target.x_axis() == lens.u_axis()) || !(target.y_axis() == lens.v_axis())) {
    throw Error(ErrorKind::InvalidArgument, "target is not on the focal grid of the incident field");
  }
  const PixelRaster raster(array, incident.x_axis(), incident.y_axis());
  const NearModel model = make_model(array, incident, raster);
  const auto& kern = simd::kernels();
  const std::size_t n = incident.size();

  if (field_energy(target) > steerable_energy(array, incident, setup) * (1.0 + 1e-12)) {
    throw Error(ErrorKind::Infeasible, "target energy exceeds what the array can steer");
  }

  // Fixed zero-order background from the gap field.
  FieldGrid background(lens.x_axis(), lens.y_axis());
  background.values() = model.gap;
  lens.forward_inplace(background.data());

  const GridAxis& u = lens.u_axis();
  const GridAxis& v = lens.v_axis();
  double r0 = config.zero_order_radius;
  if (r0 == 0.0) {
    r0 = 2.0 * setup.wavelength * setup.focal_length / std::max(array.width(), array.height());
  }
  RetrievalReport report;
  report.window.assign(target.size(), 0);
  FieldGrid goal(u, v);
  std::vector<double> goal_mag(target.size(), -1.0);
  for (std::size_t iv = 0; iv < v.count; ++iv) {
    for (std::size_t iu = 0; iu < u.count; ++iu) {
      const std::size_t k = iv * u.count + iu;
      if (target.values()[k] == cplx{}) continue;
      if (config.block_zero_order) {
        const double uu = u.at(iu), vv = v.at(iv);
        if (uu * uu + vv * vv <= r0 * r0) continue;
      }
      report.window[k] = 1;
      goal.values()[k] = target.values()[k] + background.values()[k];
      goal_mag[k] = std::abs(goal.values()[k]);
    }
  }
  if (std::none_of(report.window.begin(), report.window.end(), [](unsigned char w) { return w != 0; })) {
    throw Error(ErrorKind::InvalidArgument, "target has an empty signal window");
  }

  std::vector<double> phase(array.phase.size(), 0.0);
  if (config.random_start) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    for (double& p : phase) p = dist(rng);
  } else {
    for (std::size_t p = 0; p < phase.size(); ++p) phase[p] = wrap_phase(array.phase[p]);
  }
  for (double& p : phase) p = quantize(p, config.quantization_levels);

  FieldGrid focal(u, v);
  auto evaluate = [&]() {
    synthesize(model, phase, focal.values());
    lens.forward_inplace(focal.data());
    return amplitude_correlation(focal, goal, report.window);
  };

  report.array = array;
  report.correlation = evaluate();
  report.array.phase = phase;
  report.achieved = focal;

  const std::size_t nx = incident.nx();
  const std::size_t per = raster.samples_per_pitch();
  std::vector<cplx> acc(phase.size());
  for (int it = 1; it <= config.max_iters; ++it) {
    kern.impose_magnitude(focal.data(), goal_mag.data(), n);
    lens.inverse_inplace(focal.data());
    cplx* near = focal.data();
    for (std::size_t k = 0; k < n; ++k) near[k] -= model.gap[k];
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t pn = 0; pn < array.rows; ++pn) {
      for (std::size_t iy = raster.first_y(pn); iy < raster.first_y(pn) + per; ++iy) {
        for (std::size_t pm = 0; pm < array.cols; ++pm) {
          const std::size_t k = iy * nx + raster.first_x(pm);
          acc[pn * array.cols + pm] +=
              kern.weighted_conj_dot(model.alpha.data() + k, incident.data() + k, near + k, per);
        }
      }
    }
    for (std::size_t p = 0; p < phase.size(); ++p) {
      if (acc[p] != cplx{}) phase[p] = quantize(wrap_phase(std::arg(acc[p])), config.quantization_levels);
    }
    const double c = evaluate();
    if (c > report.correlation) {
      report.correlation = c;
      report.array.phase = phase;
      report.achieved = focal;
    }
    report.history.push_back(report.correlation);
    report.iterations = it;
    const std::size_t h = report.history.size();
    if (h > static_cast<std::size_t>(config.patience)) {
      const double gain = report.history[h - 1] - report.history[h - 1 - static_cast<std::size_t>(config.patience)];
      if (gain < config.tol) {
        report.converged = true;
        break;
      }
    }
  }
  return report;
}

}  // namespace oirs::opa
