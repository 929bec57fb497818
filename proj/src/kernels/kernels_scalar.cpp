#include "spinscale/kernels/kernels.hpp"

#include <cmath>

namespace spinscale::kernels::scalar {

std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double ar = a[p].real(), ai = a[p].imag();
    const double br = b[p].real(), bi = b[p].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim) {
  for (std::size_t j = 0; j < dim; ++j) {
    const std::complex<double> q = std::conj(phases[j]);
    const std::complex<double>* col_in = in + j * dim;
    std::complex<double>* col_out = out + j * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      col_out[i] = phases[i] * col_in[i] * q;
    }
  }
}

void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n) {
  for (std::size_t p = 0; p < n; ++p) y[p] += alpha * x[p];
}

double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n) {
  double m2 = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double dr = a[p].real() - b[p].real();
    const double di = a[p].imag() - b[p].imag();
    const double d2 = dr * dr + di * di;
    if (d2 > m2) m2 = d2;
  }
  return std::sqrt(m2);
}

}  // namespace spinscale::kernels::scalar
