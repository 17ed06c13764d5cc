#pragma once

// Data-parallel inner loops shared by the optics models. Every kernel has a
// scalar reference implementation; wider variants are selected at runtime
// from what the CPU reports and must agree with the reference to rounding.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace oirs::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  /// y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// Σ values[i] over i with (xs[i] − cx)² + dy2 ≤ r2. One grid row of a
  /// disk integration; dy2 is the squared row offset from the disk center.
  double (*disk_row_sum)(const double* values, const double* xs, std::size_t n, double cx,
                         double dy2, double r2);

  /// Σ |z[i]|²
  double (*energy)(const cplx* z, std::size_t n);

  /// z[i] *= w[i]
  void (*multiply)(cplx* z, const cplx* w, std::size_t n);

  /// z[i] ← magnitude[i] · z[i]/|z[i]| where magnitude[i] ≥ 0; entries with
  /// negative magnitude are left untouched. A zero z[i] takes phase 0.
  void (*impose_magnitude)(cplx* z, const double* magnitude, std::size_t n);

  /// Σ w[i] · conj(a[i]) · b[i]
  cplx (*weighted_conj_dot)(const double* w, const cplx* a, const cplx* b, std::size_t n);
};

/// Kernels for a specific instruction set. Throws InvalidArgument if the
/// variant was not compiled in or the CPU lacks it.
const KernelTable& table(Isa isa);

/// Whether `isa` can run on this machine in this build.
bool supported(Isa isa) noexcept;

/// Instruction sets usable here, scalar first.
std::vector<Isa> available();

/// The active table. First use picks the widest supported variant unless the
/// OIRS_SIMD environment variable names one ("scalar", "avx2").
const KernelTable& kernels();

/// Overrides the active variant for the whole process.
void select(Isa isa);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(OIRS_BUILD_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace oirs::simd
