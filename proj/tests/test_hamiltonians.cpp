#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/spin_core/operators.hpp"

using namespace spinscale;

namespace {

SpinSystem random_system(int n, std::uint64_t seed, double scale = 1000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RealMatrix d = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = scale * uni(rng);
  }
  return SpinSystem(n, d, RealVector::Zero(n));
}

}  // namespace

TEST_CASE("two-spin secular dipolar eigenvalues: d/2, d/2, -d, 0") {
  const double d = 2.0 * kPi * 137.0;
  const Matrix h = ham::dipolar_secular(SpinSystem::pair(d), Axis::z);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-d).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(d / 2).epsilon(1e-12));
  CHECK(ev[3] == doctest::Approx(d / 2).epsilon(1e-12));
}

TEST_CASE("axis-sum identity H_x + H_y + H_z = 0") {
  for (int n : {2, 3, 5}) {
    const SpinSystem sys = random_system(n, 100 + n);
    const Matrix sum = ham::dipolar_secular(sys, Axis::x) +
                       ham::dipolar_secular(sys, Axis::y) +
                       ham::dipolar_secular(sys, Axis::z);
    CHECK(sum.cwiseAbs().maxCoeff() < 1e-12 *
              ham::dipolar_secular(sys, Axis::z).cwiseAbs().maxCoeff());
  }
}

TEST_CASE("rotation covariance: pi/2 about x maps H_d^z to H_d^y") {
  const SpinSystem sys = random_system(3, 7);
  const Matrix hz = ham::dipolar_secular(sys, Axis::z);
  const Matrix hy = ham::dipolar_secular(sys, Axis::y);
  const Matrix p = global_xy_rotation(sys, 0.0, kPi / 2.0);  // +x pulse
  CHECK((p.adjoint() * hz * p - hy).cwiseAbs().maxCoeff() <
        1e-10 * hz.cwiseAbs().maxCoeff());

  // and pi/2 about y maps H_d^z to H_d^x
  const Matrix hx = ham::dipolar_secular(sys, Axis::x);
  const Matrix py = global_xy_rotation(sys, kPi / 2.0, kPi / 2.0);
  CHECK((py.adjoint() * hz * py - hx).cwiseAbs().maxCoeff() <
        1e-10 * hz.cwiseAbs().maxCoeff());
}

TEST_CASE("zeeman term") {
  const SpinSystem zero = random_system(3, 11).with_zeeman_offsets(RealVector::Zero(3));
  CHECK(ham::zeeman(zero).cwiseAbs().maxCoeff() == 0.0);

  RealVector w(1);
  w << 2.0 * kPi * 100.0;
  const SpinSystem one(1, RealMatrix::Zero(1, 1), w);
  const Matrix hz = ham::zeeman(one);
  CHECK(hz(0, 0).real() == doctest::Approx(-kPi * 100.0));
  CHECK(hz(1, 1).real() == doctest::Approx(kPi * 100.0));

  // uniform offsets commute with the secular dipolar Hamiltonian
  RealVector uniform = RealVector::Constant(4, 350.0);
  const SpinSystem sys = random_system(4, 13).with_zeeman_offsets(uniform);
  const Matrix hd = ham::dipolar_secular(sys, Axis::z);
  const Matrix hw = ham::zeeman(sys);
  CHECK((hd * hw - hw * hd).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("double-quantum generator") {
  const SpinSystem pair = SpinSystem::pair(1000.0);
  const Matrix dq = ham::double_quantum(pair);
  // couples only the aligned states |00> and |11>
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool coupling = (r == 0 && c == 3) || (r == 3 && c == 0);
      if (coupling) {
        CHECK(std::abs(dq(r, c)) > 0.0);
      } else {
        CHECK(std::abs(dq(r, c)) == 0.0);
      }
    }
  }
  const Matrix iz = collective_operator(pair, Axis::z);
  CHECK((dq * iz - iz * dq).cwiseAbs().maxCoeff() > 100.0);  // non-secular

  const SpinSystem uncoupled(3, RealMatrix::Zero(3, 3), RealVector::Zero(3));
  CHECK(ham::double_quantum(uncoupled).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("all generators are traceless and Hermitian") {
  const SpinSystem sys = random_system(4, 21).with_zeeman_offsets(
      (RealVector(4) << 100, -50, 30, 10).finished());
  for (const Matrix& h : {ham::dipolar_secular(sys, Axis::x),
                          ham::dipolar_secular(sys, Axis::y),
                          ham::dipolar_secular(sys, Axis::z), ham::zeeman(sys),
                          ham::double_quantum(sys)}) {
    CHECK(std::abs(h.trace()) < 1e-12 * (1.0 + h.cwiseAbs().maxCoeff()));
    CHECK(is_hermitian(h));
  }
}

TEST_CASE("HamiltonianSpec builds and serializes") {
  const SpinSystem sys = random_system(3, 33);
  ham::HamiltonianSpec spec;
  spec.kind = ham::Kind::composite;
  ham::HamiltonianSpec a, b;
  a.kind = ham::Kind::dipolar_secular;
  a.axis = Axis::y;
  a.scale = 0.3;
  b.kind = ham::Kind::zeeman;
  spec.terms = {a, b};

  const Matrix built = spec.build(sys);
  const Matrix expect = 0.3 * ham::dipolar_secular(sys, Axis::y) + ham::zeeman(sys);
  CHECK((built - expect).cwiseAbs().maxCoeff() < 1e-12);

  nlohmann::json j = spec;
  const auto round = j.get<ham::HamiltonianSpec>();
  CHECK((round.build(sys) - built).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS((void)ham::axis_from_name("w"), ValidationError);
}
