#pragma once

#include <functional>

namespace oirs::quad {

struct Options {
  /// Stop refining a cell once its 4-way split changes the estimate by less
  /// than rel_tol times the whole-domain estimate.
  double rel_tol = 1e-8;
  int max_depth = 14;
};

using Integrand = std::function<double(double x, double y)>;

/// Adaptive tensor Gauss–Legendre over [x0, x1] × [y0, y1].
double integrate_rect(const Integrand& f, double x0, double x1, double y0, double y1,
                      const Options& opts = {});

/// Integral of f over the disk of `radius` about (cx, cy), done in polar
/// coordinates with the same adaptive rule.
double integrate_disk(const Integrand& f, double cx, double cy, double radius,
                      const Options& opts = {});

}  // namespace oirs::quad
