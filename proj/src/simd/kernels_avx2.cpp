// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and only reached through the dispatch table after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "oirs/simd/kernels.hpp"

namespace oirs::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double disk_row_sum(const double* values, const double* xs, std::size_t n, double cx,
                    double dy2, double r2) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vdy2 = _mm256_set1_pd(dy2);
  const __m256d vr2 = _mm256_set1_pd(r2);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), vdy2);
    const __m256d inside = _mm256_cmp_pd(d2, vr2, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(inside, _mm256_loadu_pd(values + i)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double dx = xs[i] - cx;
    if (dx * dx + dy2 <= r2) sum += values[i];
  }
  return sum;
}

double energy(const cplx* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    const __m256d a = _mm256_loadu_pd(p + i);
    const __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < m; ++i) sum += p[i] * p[i];
  return sum;
}

// (a + ib)(c + id) on two complex values per register.
inline __m256d cmul(__m256d z, __m256d w) {
  const __m256d w_re = _mm256_movedup_pd(w);          // c c
  const __m256d w_im = _mm256_permute_pd(w, 0xF);     // d d
  const __m256d z_swap = _mm256_permute_pd(z, 0x5);   // b a
  return _mm256_fmaddsub_pd(z, w_re, _mm256_mul_pd(z_swap, w_im));
}

void multiply(cplx* z, const cplx* w, std::size_t n) {
  double* pz = reinterpret_cast<double*>(z);
  const double* pw = reinterpret_cast<const double*>(w);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d r = cmul(_mm256_loadu_pd(pz + 2 * i), _mm256_loadu_pd(pw + 2 * i));
    _mm256_storeu_pd(pz + 2 * i, r);
  }
  for (; i < n; ++i) {
    const double a = z[i].real(), b = z[i].imag();
    const double c = w[i].real(), d = w[i].imag();
    z[i] = cplx(std::fma(a, c, -b * d), std::fma(a, d, b * c));
  }
}

void impose_magnitude(cplx* z, const double* magnitude, std::size_t n) {
  double* pz = reinterpret_cast<double*>(z);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d re_one = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pz + 2 * i);
    // Broadcast each magnitude across its (re, im) pair.
    const __m128d m2 = _mm_loadu_pd(magnitude + i);
    const __m256d mag = _mm256_permute4x64_pd(_mm256_castpd128_pd256(m2), 0x50);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mod = _mm256_sqrt_pd(_mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5)));
    const __m256d nonzero = _mm256_cmp_pd(mod, zero, _CMP_GT_OQ);
    const __m256d scaled = _mm256_div_pd(_mm256_mul_pd(mag, v), mod);
    const __m256d fallback = _mm256_mul_pd(mag, re_one);
    const __m256d out = _mm256_blendv_pd(fallback, scaled, nonzero);
    const __m256d constrained = _mm256_cmp_pd(mag, zero, _CMP_GE_OQ);
    _mm256_storeu_pd(pz + 2 * i, _mm256_blendv_pd(v, out, constrained));
  }
  for (; i < n; ++i) {
    if (magnitude[i] < 0.0) continue;
    const double re = z[i].real(), im = z[i].imag();
    const double mod = std::sqrt(re * re + im * im);
    z[i] = mod > 0.0 ? cplx(magnitude[i] * re / mod, magnitude[i] * im / mod)
                     : cplx(magnitude[i], 0.0);
  }
}

cplx weighted_conj_dot(const double* w, const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  // Lanes hold (ar*br + ai*bi) in even slots and (ar*bi - ai*br) in odd ones,
  // each scaled by its weight.
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m128d w2 = _mm_loadu_pd(w + i);
    const __m256d vw = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
    const __m256d wa = _mm256_mul_pd(vw, va);                     // w·ar, w·ai
    acc_re = _mm256_fmadd_pd(wa, vb, acc_re);                     // w·ar·br, w·ai·bi
    const __m256d vb_swap = _mm256_permute_pd(vb, 0x5);           // bi, br
    acc_im = _mm256_fmadd_pd(wa, vb_swap, acc_im);                // w·ar·bi, w·ai·br
  }
  alignas(32) double re4[4];
  alignas(32) double im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = (re4[0] + re4[1]) + (re4[2] + re4[3]);
  double im = (im4[0] - im4[1]) + (im4[2] - im4[3]);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += w[i] * (ar * br + ai * bi);
    im += w[i] * (ar * bi - ai * br);
  }
  return {re, im};
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{
    Isa::avx2, axpy, disk_row_sum, energy, multiply, impose_magnitude, weighted_conj_dot,
};
}  // namespace detail

}  // namespace oirs::simd
