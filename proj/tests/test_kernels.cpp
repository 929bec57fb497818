#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinscale/kernels/kernels.hpp"

using namespace spinscale;
using cxd = std::complex<double>;

namespace {

std::vector<cxd> random_array(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cxd> v(n);
  for (auto& x : v) x = {uni(rng), uni(rng)};
  return v;
}

std::vector<cxd> random_phases(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 6.283185307179586);
  std::vector<cxd> v(n);
  for (auto& x : v) x = std::exp(cxd{0.0, uni(rng)});
  return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u, 257u}) {
    const auto a = random_array(n, 10 + n);
    const auto b = random_array(n, 20 + n);

    const cxd d1 = kernels::conj_dot(a.data(), b.data(), n);
    const cxd d2 = kernels::scalar::conj_dot(a.data(), b.data(), n);
    CHECK(std::abs(d1 - d2) <= 1e-13 * (1.0 + static_cast<double>(n)));

    CHECK(kernels::max_abs_diff(a.data(), b.data(), n) ==
          doctest::Approx(kernels::scalar::max_abs_diff(a.data(), b.data(), n))
              .epsilon(1e-14));

    auto y1 = a, y2 = a;
    const cxd alpha{0.7, -1.3};
    kernels::axpy(y1.data(), alpha, b.data(), n);
    kernels::scalar::axpy(y2.data(), alpha, b.data(), n);
    CHECK(kernels::scalar::max_abs_diff(y1.data(), y2.data(), n) < 1e-14);
  }
}

TEST_CASE("phase_conjugate matches scalar and preserves norms") {
  for (std::size_t dim : {1u, 2u, 3u, 8u, 17u}) {
    const auto a = random_array(dim * dim, 123 + dim);
    const auto p = random_phases(dim, 321 + dim);
    std::vector<cxd> out1(dim * dim), out2(dim * dim);
    kernels::phase_conjugate(out1.data(), a.data(), p.data(), dim);
    kernels::scalar::phase_conjugate(out2.data(), a.data(), p.data(), dim);
    CHECK(kernels::scalar::max_abs_diff(out1.data(), out2.data(), dim * dim) < 1e-14);

    // unit phases: |out_ij| == |a_ij|
    double norm_in = 0.0, norm_out = 0.0;
    for (std::size_t i = 0; i < dim * dim; ++i) {
      norm_in += std::norm(a[i]);
      norm_out += std::norm(out1[i]);
    }
    CHECK(norm_out == doctest::Approx(norm_in).epsilon(1e-13));
  }
}

TEST_CASE("conj_dot agrees with an independent Eigen trace") {
  const std::size_t dim = 13;
  const auto a = random_array(dim * dim, 7);
  const auto b = random_array(dim * dim, 8);
  Eigen::MatrixXcd ma = Eigen::Map<const Eigen::MatrixXcd>(a.data(), dim, dim);
  Eigen::MatrixXcd mb = Eigen::Map<const Eigen::MatrixXcd>(b.data(), dim, dim);
  const cxd expected = (ma.adjoint() * mb).trace();
  const cxd got = kernels::conj_dot(a.data(), b.data(), dim * dim);
  CHECK(std::abs(got - expected) < 1e-12);
}

TEST_CASE("conj_dot of a vector with itself is a non-negative real") {
  const auto a = random_array(100, 99);
  const cxd d = kernels::conj_dot(a.data(), a.data(), a.size());
  CHECK(d.real() >= 0.0);
  CHECK(std::abs(d.imag()) < 1e-14 * d.real());
}

TEST_CASE("backend is reported") {
  const auto b = kernels::active_backend();
  CHECK(std::string(kernels::backend_name(b)).size() > 0);
}
