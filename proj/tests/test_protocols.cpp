#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/protocols/protocols.hpp"
#include "spinscale/spin_core/operators.hpp"
#include "spinscale/spin_core/propagator.hpp"

using namespace spinscale;
using namespace spinscale::proto;

namespace {

SequenceConfig ideal_config(double delta) {
  SequenceConfig c;
  c.kind = EvolutionKind::ideal;
  c.delta = delta;
  return c;
}

SequenceConfig p8_config(double delta, double tau,
                         seq::Direction dir = seq::Direction::forward) {
  SequenceConfig c;
  c.kind = EvolutionKind::P8;
  c.delta = delta;
  c.tau = tau;
  c.direction = dir;
  return c;
}

}  // namespace

TEST_CASE("pulsed decay at delta = 0 stays near 1 and improves with smaller tau") {
  const SpinSystem sys = SpinSystem::random_cluster(4, 2.0 * kPi * 400.0, 90u);
  const auto max_dev = [&](double tau) {
    const SequenceConfig cfg = p8_config(0.0, tau);
    const auto curve =
        magnetization_decay(sys, cfg, stroboscopic_times(cfg, 20));
    double worst = 0.0;
    for (double v : curve.values) worst = std::max(worst, std::abs(v - 1.0));
    return worst;
  };
  const double at4 = max_dev(4e-6), at2 = max_dev(2e-6);
  CHECK(at4 < 0.2);
  CHECK(at2 < at4);
}

TEST_CASE("two-spin decay: idealized evolution gives cos(3 delta d t / 2)") {
  const double d = 2.0 * kPi * 350.0, delta = 0.25;
  const SpinSystem sys = SpinSystem::pair(d);
  std::vector<double> times;
  for (int i = 0; i <= 40; ++i) times.push_back(i * 3e-3 / 40.0);
  const auto curve = magnetization_decay(sys, ideal_config(delta), times);
  CHECK(curve.values.front() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(curve.values[i] ==
          doctest::Approx(std::cos(1.5 * delta * d * times[i])).epsilon(1e-10));
    CHECK(curve.self_times[i] == doctest::Approx(delta * times[i]));
  }
}

TEST_CASE("scaled evolutions +delta and -delta give the same magnetization") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 300.0, 91u);
  const Matrix h = ham::dipolar_secular(sys, Axis::y);
  const Matrix iz = collective_operator(sys, Axis::z);
  const Propagator forward(0.3 * h);
  const Propagator backward(-0.3 * h);
  for (double t : {0.2e-3, 0.9e-3, 2.2e-3}) {
    const double pf = correlator(forward.evolve(iz, t), iz, sys);
    const double pb = correlator(backward.evolve(iz, t), iz, sys);
    CHECK(pf == doctest::Approx(pb).epsilon(1e-10));
  }
}

TEST_CASE("pulsed forward and backward magnetization agree closely at small tau") {
  const SpinSystem sys = SpinSystem::random_cluster(4, 2.0 * kPi * 200.0, 92u);
  const SequenceConfig f = p8_config(0.3, 2e-6, seq::Direction::forward);
  const SequenceConfig b = p8_config(0.3, 2e-6, seq::Direction::backward);
  const auto tf = stroboscopic_times(f, 30);
  const auto cf = magnetization_decay(sys, f, tf);
  const auto cb = magnetization_decay(sys, b, tf);
  for (std::size_t i = 0; i < tf.size(); ++i) {
    CHECK(std::abs(cf.values[i] - cb.values[i]) < 5e-3);
  }
}

TEST_CASE("free evolution entry reproduces the idealized delta = 1 curve") {
  const SpinSystem sys = SpinSystem::random_cluster(4, 2.0 * kPi * 300.0, 93u);
  SequenceConfig cfg;
  cfg.kind = EvolutionKind::free_evolution;
  cfg.delta = 1.0;
  std::vector<double> times;
  for (int i = 0; i <= 12; ++i) times.push_back(i * 1.2e-3 / 12.0);
  const auto pulsed = magnetization_decay(sys, cfg, times);
  const auto ideal = magnetization_decay(sys, ideal_config(1.0), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(pulsed.values[i] == doctest::Approx(ideal.values[i]).epsilon(1e-10));
  }

  // with Zeeman offsets the pi pulse refocuses them at leading order
  const SpinSystem offset =
      sys.with_zeeman_offsets((RealVector(4) << 250, -150, 90, 40).finished());
  const auto with_offsets = magnetization_decay(offset, cfg, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(with_offsets.values[i] - ideal.values[i]) < 0.05);
  }
}

TEST_CASE("magic echo: idealized entry equals delta = -1/2; microscopic converges") {
  const SpinSystem sys = SpinSystem::random_cluster(4, 2.0 * kPi * 250.0, 94u);
  SequenceConfig me;
  me.kind = EvolutionKind::magic_echo;
  me.delta = -0.5;
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(i * 1.5e-3 / 10.0);
  const auto idealized = magnetization_decay(sys, me, times);
  const auto family = magnetization_decay(sys, ideal_config(-0.5), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(idealized.values[i] == doctest::Approx(family.values[i]).epsilon(1e-12));
    CHECK(idealized.self_times[i] == doctest::Approx(-0.5 * times[i]));
  }

  const auto micro_err = [&](double drive) {
    SequenceConfig m = me;
    m.drive_amplitude = drive;
    const auto curve = magnetization_decay(sys, m, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, std::abs(curve.values[i] - idealized.values[i]));
    }
    return worst;
  };
  const double coarse = micro_err(2.0 * kPi * 20e3);
  const double fine = micro_err(2.0 * kPi * 160e3);
  CHECK(fine < coarse);
  CHECK(fine < 0.05);
}

TEST_CASE("loschmidt echo: exact reversal stays at one") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 400.0, 95u);
  std::vector<double> times;
  for (int i = 0; i <= 25; ++i) times.push_back(i * 2e-3 / 25.0);
  const auto echo = loschmidt_echo(sys, ideal_config(0.45), times);
  for (double v : echo.values) CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("pulsed echo with control errors decays; normalization divides pointwise") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 350.0, 96u);
  SequenceConfig cfg = p8_config(0.3, 4e-6);
  cfg.error.flip_angle_error = 0.03;
  cfg.error.pulse_width = 8e-7;
  const auto times = stroboscopic_times(cfg, 50);
  const auto echo = loschmidt_echo(sys, cfg, times);
  CHECK(echo.values.front() == doctest::Approx(1.0).epsilon(1e-12));
  // decaying trend, allowing the oscillation the control errors produce
  const auto mean = [&](std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += echo.values[i];
    return m / (hi - lo);
  };
  CHECK(mean(38, 51) < mean(0, 13) - 0.1);
  CHECK(*std::min_element(echo.values.begin(), echo.values.end()) < 0.8);

  SequenceConfig ref = cfg;
  ref.delta = 0.0;
  const auto echo0 = loschmidt_echo(sys, ref, times);
  const auto norm = normalized_by_reference(echo, echo0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(norm.values[i] == doctest::Approx(echo.values[i] / echo0.values[i]));
  }
}

TEST_CASE("echo rejects kinds without a forward/backward pair") {
  const SpinSystem sys = SpinSystem::pair(1000.0);
  SequenceConfig cfg;
  cfg.kind = EvolutionKind::free_evolution;
  cfg.delta = 1.0;
  CHECK_THROWS_AS((void)loschmidt_echo(sys, cfg, {0.0, 1e-4}), ValidationError);
}

TEST_CASE("MQC at t = 0: all weight in order zero") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 400.0, 97u);
  const auto spec = mqc_spectrum(sys, ideal_config(0.4), 0.0, 16);
  CHECK(spec.at_order(0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int q = 1; q <= 5; ++q) {
    CHECK(std::abs(spec.at_order(q)) < 1e-12);
    CHECK(std::abs(spec.at_order(-q)) < 1e-12);
  }
}

TEST_CASE("two-spin MQC: orders {0, +-2} matching the direct binning oracle") {
  const SpinSystem sys = SpinSystem::pair(2.0 * kPi * 300.0);
  const SequenceConfig cfg = ideal_config(0.5);
  const double t = 0.8e-3;
  const auto spec = mqc_spectrum(sys, cfg, t, 8);
  const Matrix iz_t = evolved_iz(sys, cfg, t);
  const auto w = coherence_order_weights(sys, iz_t);
  CHECK(spec.at_order(0) == doctest::Approx(w[2]).epsilon(1e-10));
  CHECK(spec.at_order(2) == doctest::Approx(w[4]).epsilon(1e-10));
  CHECK(spec.at_order(-2) == doctest::Approx(w[0]).epsilon(1e-10));
  CHECK(std::abs(spec.at_order(1)) < 1e-12);
  CHECK(std::abs(spec.at_order(-1)) < 1e-12);
  CHECK(w[2] + w[4] + w[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("MQC identities on a six-spin cluster") {
  const SpinSystem sys = SpinSystem::random_cluster(6, 2.0 * kPi * 400.0, 98u);
  const SequenceConfig cfg = ideal_config(0.35);
  const double dbar = sys.mean_abs_coupling();
  for (double x : {0.8, 2.4}) {
    const auto spec = mqc_spectrum(sys, cfg, x / dbar / cfg.delta, 32);
    double sum = 0.0;
    for (double s : spec.s_q) {
      sum += s;
      CHECK(s >= -1e-12);
    }
    CHECK(sum == doctest::Approx(spec.s_phi.back()).epsilon(1e-10));
    for (int q = 1; q <= 8; ++q) {
      CHECK(spec.at_order(q) == doctest::Approx(spec.at_order(-q)).epsilon(1e-10));
      if (q % 2 == 1) CHECK(std::abs(spec.at_order(q)) < 1e-12);
    }
  }
}

TEST_CASE("second moment equals the commutator oracle and the phase curvature") {
  for (int n : {3, 5}) {
    const SpinSystem sys = SpinSystem::random_cluster(n, 2.0 * kPi * 400.0, 200u + n);
    const SequenceConfig cfg = ideal_config(0.4);
    const double dbar = sys.mean_abs_coupling();
    for (double x : {0.5, 1.8}) {
      const double t = x / dbar / cfg.delta;
      const auto spec = mqc_spectrum(sys, cfg, t, 64);
      const double c_zz = direct_oto_commutator(sys, evolved_iz(sys, cfg, t));
      CHECK(std::abs(spec.second_moment - c_zz) < 1e-8 * std::max(1.0, c_zz));
      // finite-difference curvature carries an O(h^2) error with h = 2 pi / Q
      CHECK(second_moment_phase_curvature(spec) ==
            doctest::Approx(spec.second_moment).epsilon(0.02));
    }
  }
}

TEST_CASE("direct commutator from a Hamiltonian handle") {
  const SpinSystem sys = SpinSystem::pair(2.0 * kPi * 250.0);
  const Matrix h = 0.5 * ham::dipolar_secular(sys, Axis::y);
  CHECK(direct_oto_commutator(sys, h, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(direct_oto_commutator(sys, h, 1e-3) > 0.0);
}

TEST_CASE("aliasing is detected when Q is too small") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 500.0, 99u);
  const SequenceConfig cfg = ideal_config(0.5);
  const double t = 3.0 / sys.mean_abs_coupling() / cfg.delta;
  CHECK_THROWS_WITH_AS((void)mqc_spectrum(sys, cfg, t, 8),
                       doctest::Contains("aliasing"), ComputeError);
  CHECK_THROWS_AS((void)mqc_spectrum(sys, cfg, t, 7), ValidationError);  // odd Q
}

TEST_CASE("spin count grows and saturates within the cluster size") {
  const SpinSystem sys = SpinSystem::random_cluster(8, 2.0 * kPi * 400.0, 101u);
  const SequenceConfig cfg = ideal_config(0.5);
  const double dbar = sys.mean_abs_coupling();
  std::vector<double> n_of_t;
  for (double x : {0.1, 0.5, 1.5, 4.0, 8.0}) {
    const auto spec = mqc_spectrum(sys, cfg, x / dbar / cfg.delta, 32);
    n_of_t.push_back(std::sqrt(std::max(spec.second_moment, 0.0)));
  }
  CHECK(n_of_t[1] > n_of_t[0]);
  CHECK(n_of_t[2] > n_of_t[1]);
  for (double n : n_of_t) CHECK(n <= 8.0);
}

TEST_CASE("idealized self-time collapse is exact") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 350.0, 102u);
  const double dbar = sys.mean_abs_coupling();
  std::vector<SignalCurve> curves;
  for (double delta : {0.1, 0.4, 1.0}) {
    std::vector<double> times;
    for (int i = 0; i <= 30; ++i) times.push_back(4.0 / dbar * i / 30.0 / delta);
    curves.push_back(magnetization_decay(sys, ideal_config(delta), times));
  }
  const auto report = self_time_collapse(curves);
  CHECK(report.max_spread < 1e-10);
  CHECK(report.mean_spread <= report.max_spread);
}

TEST_CASE("collapse validation errors") {
  const SpinSystem sys = SpinSystem::pair(1000.0);
  std::vector<double> t1 = {0.0, 1e-3}, t2 = {5e-3, 6e-3};
  const auto a = magnetization_decay(sys, ideal_config(0.1), t1);
  const auto b = magnetization_decay(sys, ideal_config(1.0), t2);
  CHECK_THROWS_AS((void)self_time_collapse({a}), ValidationError);
  CHECK_THROWS_WITH_AS((void)self_time_collapse({a, b}), doctest::Contains("overlap"),
                       ValidationError);
}

TEST_CASE("stroboscopic grid validation") {
  const SpinSystem sys = SpinSystem::pair(1000.0);
  const SequenceConfig cfg = p8_config(0.2, 2e-6);
  CHECK_THROWS_AS((void)magnetization_decay(sys, cfg, {1.1e-5}), ValidationError);
}

TEST_CASE("double-quantum contrast: even orders, second moment saturates low") {
  // nearest-neighbour-dominated chain: the dipolar family keeps building
  // wider coherences while the double-quantum generator saturates early
  const SpinSystem sys = SpinSystem::chain(8, 2.0 * kPi * 500.0);
  const double d = 2.0 * kPi * 500.0;

  SequenceConfig dq = ideal_config(1.0);
  ham::HamiltonianSpec gen;
  gen.kind = ham::Kind::double_quantum;
  dq.generator = gen;

  const SequenceConfig dip = ideal_config(1.0);

  double dq_max = 0.0, dip_max = 0.0;
  for (double x : {2.0, 5.0, 9.0, 14.0}) {
    const double t = x / d;
    const auto spec_dq = mqc_spectrum(sys, dq, t, 32);
    const auto spec_dip = mqc_spectrum(sys, dip, t, 32);
    for (int q = 1; q < 16; q += 2) {
      CHECK(std::abs(spec_dq.at_order(q)) < 1e-12);  // even orders only
    }
    dq_max = std::max(dq_max, spec_dq.second_moment);
    dip_max = std::max(dip_max, spec_dip.second_moment);
  }
  CHECK(dq_max < 0.6 * dip_max);
}

TEST_CASE("collapse spread grows with the flip-angle error") {
  const SpinSystem sys = SpinSystem::random_cluster(5, 2.0 * kPi * 200.0, 103u);
  const auto spread_at = [&](double eps) {
    std::vector<SignalCurve> curves;
    for (double delta : {0.2, 0.4}) {
      SequenceConfig cfg = p8_config(delta, 2e-6);
      cfg.error.flip_angle_error = eps;
      const int cycles = static_cast<int>(std::lround(0.4 / delta) * 20);
      curves.push_back(
          magnetization_decay(sys, cfg, stroboscopic_times(cfg, cycles)));
    }
    return self_time_collapse(curves).max_spread;
  };
  // small errors: past ~eps = 0.02 the curves decohere completely and the
  // spread saturates near its maximum instead of growing
  const double s0 = spread_at(0.0), s1 = spread_at(0.002), s2 = spread_at(0.01);
  CHECK(s0 < s1);
  CHECK(s1 < s2);
}
