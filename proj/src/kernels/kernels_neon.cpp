// NEON variants for aarch64. One float64x2_t holds a single complex double.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "spinscale/kernels/kernels.hpp"

namespace spinscale::kernels::neon {

namespace {

// (ar+i ai)(br+i bi) -> (ar*br - ai*bi, ar*bi + ai*br)
inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  const float64x2_t ar = vdupq_laneq_f64(a, 0);
  const float64x2_t ai = vdupq_laneq_f64(a, 1);
  const float64x2_t bsw = vextq_f64(b, b, 1);          // (bi, br)
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(ar, b), vmulq_f64(ai, bsw), sign);
}

}  // namespace

std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t acc_re = vdupq_n_f64(0.0);  // (ar*br, ai*bi) accumulated
  float64x2_t acc_im = vdupq_n_f64(0.0);  // (ar*bi, ai*br) accumulated
  for (std::size_t p = 0; p < n; ++p) {
    const float64x2_t va = vld1q_f64(pa + 2 * p);
    const float64x2_t vb = vld1q_f64(pb + 2 * p);
    acc_re = vfmaq_f64(acc_re, va, vb);
    acc_im = vfmaq_f64(acc_im, va, vextq_f64(vb, vb, 1));
  }
  const double re = vaddvq_f64(acc_re);
  // acc_im lane0 = sum ar*bi, lane1 = sum ai*br; conj dot wants ar*bi - ai*br.
  const double im = vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1);
  return {re, im};
}

void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim) {
  const double* pin = reinterpret_cast<const double*>(in);
  const double* pp = reinterpret_cast<const double*>(phases);
  double* pout = reinterpret_cast<double*>(out);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::complex<double> qc = std::conj(phases[j]);
    const float64x2_t q = {qc.real(), qc.imag()};
    const double* ci = pin + 2 * j * dim;
    double* co = pout + 2 * j * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      const float64x2_t v = cmul(vld1q_f64(pp + 2 * i), vld1q_f64(ci + 2 * i));
      vst1q_f64(co + 2 * i, cmul(v, q));
    }
  }
}

void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n) {
  const float64x2_t va = {alpha.real(), alpha.imag()};
  double* py = reinterpret_cast<double*>(y);
  const double* px = reinterpret_cast<const double*>(x);
  for (std::size_t p = 0; p < n; ++p) {
    const float64x2_t r = vaddq_f64(vld1q_f64(py + 2 * p), cmul(va, vld1q_f64(px + 2 * p)));
    vst1q_f64(py + 2 * p, r);
  }
}

double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double m2 = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const float64x2_t d = vsubq_f64(vld1q_f64(pa + 2 * p), vld1q_f64(pb + 2 * p));
    const double d2 = vaddvq_f64(vmulq_f64(d, d));
    if (d2 > m2) m2 = d2;
  }
  return std::sqrt(m2);
}

}  // namespace spinscale::kernels::neon

#endif  // aarch64
