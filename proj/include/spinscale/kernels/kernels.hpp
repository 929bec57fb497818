#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the correlator and protocol layers.
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at runtime. The dispatched
// entry points below are what library code calls; the per-backend namespaces
// exist so tests can check SIMD results against the scalar reference.
//
// All matrices are dense column-major std::complex<double>, flattened.

namespace spinscale::kernels {

enum class Backend { scalar, avx2, neon };

// Backend chosen for this process. Honors SPINSCALE_KERNELS=scalar|avx2|neon
// (unsupported requests fall back to the best available backend).
Backend active_backend();
const char* backend_name(Backend b);

// sum_p conj(a[p]) * b[p]  ==  Tr[A^dag B] for equally shaped matrices.
std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n);

// out_ij = p_i * in_ij * conj(p_j) for a dim x dim column-major matrix.
// With p_i = exp(i lambda_i t) this is one evolution step in the eigenbasis;
// with p_i = exp(i phi m_i) it applies a collective z-rotation.
void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim);

// y[p] += alpha * x[p]
void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n);

// max_p |a[p] - b[p]|
double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n);

namespace scalar {
std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n);
void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim);
void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n);
double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n);
void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim);
void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n);
double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n);
void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim);
void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n);
double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace spinscale::kernels
