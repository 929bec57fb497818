// AVX2+FMA variants. Compiled with -mavx2 -mfma on x86-64 only; dispatch.cpp
// gates them behind a cpuid check so the binary still runs on older cores.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "spinscale/kernels/kernels.hpp"

namespace spinscale::kernels::avx2 {

namespace {

// One __m256d holds two complex doubles as (re0, im0, re1, im1).

// (ar+i ai)(br+i bi): even lanes ar*br - ai*bi, odd lanes ar*bi + ai*br.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);         // (ar0, ar0, ar1, ar1)
  const __m256d ai = _mm256_permute_pd(a, 0xF);    // (ai0, ai0, ai1, ai1)
  const __m256d bsw = _mm256_permute_pd(b, 0x5);   // (bi0, br0, bi1, br1)
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bsw));
}

// conj(a)*b: even lanes ar*br + ai*bi, odd lanes ar*bi - ai*br.
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);
  const __m256d ai = _mm256_permute_pd(a, 0xF);
  const __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(ar, b, _mm256_mul_pd(ai, bsw));
}

}  // namespace

std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    acc = _mm256_add_pd(acc, cmul_conj(_mm256_loadu_pd(pa + 2 * p),
                                       _mm256_loadu_pd(pb + 2 * p)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; p < n; ++p) {
    const double ar = a[p].real(), ai = a[p].imag();
    const double br = b[p].real(), bi = b[p].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim) {
  const double* pin = reinterpret_cast<const double*>(in);
  const double* pp = reinterpret_cast<const double*>(phases);
  double* pout = reinterpret_cast<double*>(out);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::complex<double> qc = std::conj(phases[j]);
    const __m256d q = _mm256_setr_pd(qc.real(), qc.imag(), qc.real(), qc.imag());
    const double* ci = pin + 2 * j * dim;
    double* co = pout + 2 * j * dim;
    std::size_t i = 0;
    for (; i + 2 <= dim; i += 2) {
      const __m256d v = cmul(_mm256_loadu_pd(pp + 2 * i), _mm256_loadu_pd(ci + 2 * i));
      _mm256_storeu_pd(co + 2 * i, cmul(v, q));
    }
    for (; i < dim; ++i) {
      out[i + j * dim] = phases[i] * in[i + j * dim] * qc;
    }
  }
}

void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n) {
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  double* py = reinterpret_cast<double*>(y);
  const double* px = reinterpret_cast<const double*>(x);
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(py + 2 * p),
                                    cmul(va, _mm256_loadu_pd(px + 2 * p)));
    _mm256_storeu_pd(py + 2 * p, r);
  }
  for (; p < n; ++p) y[p] += alpha * x[p];
}

double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d m = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * p), _mm256_loadu_pd(pb + 2 * p));
    const __m256d d2 = _mm256_mul_pd(d, d);
    // (r0^2+i0^2, ..., r1^2+i1^2, ...) in lanes 0 and 2
    m = _mm256_max_pd(m, _mm256_hadd_pd(d2, d2));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double m2 = lanes[0] > lanes[2] ? lanes[0] : lanes[2];
  for (; p < n; ++p) {
    const double dr = a[p].real() - b[p].real();
    const double di = a[p].imag() - b[p].imag();
    const double d2 = dr * dr + di * di;
    if (d2 > m2) m2 = d2;
  }
  return std::sqrt(m2);
}

}  // namespace spinscale::kernels::avx2

#endif  // x86-64
