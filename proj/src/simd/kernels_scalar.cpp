#include <cmath>

#include "oirs/simd/kernels.hpp"

namespace oirs::simd {

namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double disk_row_sum(const double* values, const double* xs, std::size_t n, double cx,
                    double dy2, double r2) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - cx;
    if (dx * dx + dy2 <= r2) sum += values[i];
  }
  return sum;
}

double energy(const cplx* z, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  return sum;
}

void multiply(cplx* z, const cplx* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z[i].real(), b = z[i].imag();
    const double c = w[i].real(), d = w[i].imag();
    z[i] = cplx(a * c - b * d, a * d + b * c);
  }
}

void impose_magnitude(cplx* z, const double* magnitude, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (magnitude[i] < 0.0) continue;
    const double re = z[i].real(), im = z[i].imag();
    const double mod = std::sqrt(re * re + im * im);
    z[i] = mod > 0.0 ? cplx(magnitude[i] * re / mod, magnitude[i] * im / mod)
                     : cplx(magnitude[i], 0.0);
  }
}

cplx weighted_conj_dot(const double* w, const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += w[i] * (ar * br + ai * bi);
    im += w[i] * (ar * bi - ai * br);
  }
  return {re, im};
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{
    Isa::scalar, axpy, disk_row_sum, energy, multiply, impose_magnitude, weighted_conj_dot,
};
}  // namespace detail

}  // namespace oirs::simd
