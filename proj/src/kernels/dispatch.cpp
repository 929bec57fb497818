#include <cstdlib>
#include <cstring>

#include "spinscale/kernels/kernels.hpp"

namespace spinscale::kernels {

namespace {

Backend resolve() {
  const char* env = std::getenv("SPINSCALE_KERNELS");
  const bool want_scalar = env && std::strcmp(env, "scalar") == 0;
  if (want_scalar) return Backend::scalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Backend::avx2;
  }
  return Backend::scalar;
#elif defined(__aarch64__)
  return Backend::neon;
#else
  return Backend::scalar;
#endif
}

}  // namespace

Backend active_backend() {
  static const Backend b = resolve();
  return b;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::complex<double> conj_dot(const std::complex<double>* a,
                              const std::complex<double>* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return avx2::conj_dot(a, b, n);
#elif defined(__aarch64__)
  if (active_backend() == Backend::neon) return neon::conj_dot(a, b, n);
#endif
  return scalar::conj_dot(a, b, n);
}

void phase_conjugate(std::complex<double>* out, const std::complex<double>* in,
                     const std::complex<double>* phases, std::size_t dim) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return avx2::phase_conjugate(out, in, phases, dim);
#elif defined(__aarch64__)
  if (active_backend() == Backend::neon) return neon::phase_conjugate(out, in, phases, dim);
#endif
  return scalar::phase_conjugate(out, in, phases, dim);
}

void axpy(std::complex<double>* y, std::complex<double> alpha,
          const std::complex<double>* x, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return avx2::axpy(y, alpha, x, n);
#elif defined(__aarch64__)
  if (active_backend() == Backend::neon) return neon::axpy(y, alpha, x, n);
#endif
  return scalar::axpy(y, alpha, x, n);
}

double max_abs_diff(const std::complex<double>* a,
                    const std::complex<double>* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) return avx2::max_abs_diff(a, b, n);
#elif defined(__aarch64__)
  if (active_backend() == Backend::neon) return neon::max_abs_diff(a, b, n);
#endif
  return scalar::max_abs_diff(a, b, n);
}

}  // namespace spinscale::kernels
