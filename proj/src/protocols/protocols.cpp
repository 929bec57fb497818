#include "spinscale/protocols/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/kernels/kernels.hpp"
#include "spinscale/parallel.hpp"
#include "spinscale/sequence_engine/average.hpp"
#include "spinscale/spin_core/operators.hpp"
#include "spinscale/spin_core/propagator.hpp"

namespace spinscale::proto {

std::string evolution_kind_name(EvolutionKind k) {
  switch (k) {
    case EvolutionKind::ideal: return "ideal";
    case EvolutionKind::P8: return "P8";
    case EvolutionKind::P16: return "P16";
    case EvolutionKind::free_evolution: return "free";
    case EvolutionKind::magic_echo: return "magic_echo";
  }
  return "?";
}

EvolutionKind evolution_kind_from_name(const std::string& name) {
  if (name == "ideal") return EvolutionKind::ideal;
  if (name == "P8") return EvolutionKind::P8;
  if (name == "P16") return EvolutionKind::P16;
  if (name == "free") return EvolutionKind::free_evolution;
  if (name == "magic_echo") return EvolutionKind::magic_echo;
  throw ValidationError("unknown evolution kind '" + name + "'");
}

namespace {

bool pulsed_cycle_kind(EvolutionKind k) {
  return k == EvolutionKind::P8 || k == EvolutionKind::P16;
}

seq::PulseSequence make_sequence(const SequenceConfig& config, seq::Direction dir) {
  seq::BuildOptions opt;
  opt.min_separation = config.min_separation;
  opt.drive_amplitude = config.drive_amplitude;
  switch (config.kind) {
    case EvolutionKind::P8:
      return seq::build_sequence(seq::Kind::P8, config.delta, config.tau, dir,
                                 config.error, opt);
    case EvolutionKind::P16:
      return seq::build_sequence(seq::Kind::P16, config.delta, config.tau, dir,
                                 config.error, opt);
    case EvolutionKind::free_evolution:
      return seq::build_sequence(seq::Kind::free_evolution, config.delta, config.tau,
                                 seq::Direction::none, config.error, opt);
    case EvolutionKind::magic_echo:
      return seq::build_sequence(seq::Kind::magic_echo, config.delta, config.tau,
                                 seq::Direction::none, config.error, opt);
    default:
      throw ValidationError("ideal evolution has no pulse sequence");
  }
}

double cycle_time_of(const SequenceConfig& config) {
  return (config.kind == EvolutionKind::P16 ? 24.0 : 12.0) * config.tau;
}

int stroboscopic_index(double t, double t_c) {
  const double k = t / t_c;
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9 * std::max(1.0, k)) {
    throw ValidationError("pulsed protocols need stroboscopic times "
                          "(multiples of the cycle time)");
  }
  return static_cast<int>(rounded);
}

CurveMetadata make_meta(const SpinSystem& system, const SequenceConfig& config,
                        const char* protocol) {
  CurveMetadata m;
  m.kind = evolution_kind_name(config.kind);
  m.direction = pulsed_cycle_kind(config.kind) ? seq::direction_name(config.direction)
                                               : "none";
  m.delta = config.delta;
  m.tau = config.tau;
  m.n_spins = system.n_spins();
  m.protocol = protocol;
  return m;
}

Matrix ideal_generator(const SpinSystem& system, const SequenceConfig& config) {
  // the idealized entries evolve under the exact scaled transverse dipolar
  // Hamiltonian; magic echo is the delta = -1/2 member of the family
  const double delta =
      config.kind == EvolutionKind::magic_echo ? -0.5 : config.delta;
  if (config.generator && config.kind == EvolutionKind::ideal) {
    return delta * config.generator->build(system);
  }
  return delta * ham::dipolar_secular(system, Axis::y);
}

// <Iz(t) Iz> on arbitrary time grids from the cached eigendecomposition.
std::vector<double> ideal_correlator_curve(const SpinSystem& system, const Matrix& h,
                                           const std::vector<double>& times) {
  const Propagator prop(h);
  const Matrix iz = collective_operator(system, Axis::z);
  const Matrix iz_eig = prop.to_eigenbasis(iz);
  const double norm = iz_norm(system);
  std::vector<double> values(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    values[i] = prop.trace_evolved(iz_eig, iz_eig, times[i]).real() / norm;
  });
  return values;
}

}  // namespace

std::vector<double> stroboscopic_times(const SequenceConfig& config, int n_cycles) {
  const double t_c = cycle_time_of(config);
  std::vector<double> times(n_cycles + 1);
  for (int k = 0; k <= n_cycles; ++k) times[k] = k * t_c;
  return times;
}

Matrix evolved_iz(const SpinSystem& system, const SequenceConfig& config, double t) {
  const Matrix iz = collective_operator(system, Axis::z);
  switch (config.kind) {
    case EvolutionKind::ideal:
      return Propagator(ideal_generator(system, config)).evolve(iz, t);
    case EvolutionKind::magic_echo:
      if (config.drive_amplitude <= 0.0) {
        return Propagator(ideal_generator(system, config)).evolve(iz, t);
      }
      [[fallthrough]];
    case EvolutionKind::free_evolution: {
      const seq::PulseSequence s = make_sequence(config, seq::Direction::none);
      const Matrix u =
          seq::propagator_for_elements(s.elements_for_time(t), system, s.error);
      return u.adjoint() * iz * u;
    }
    case EvolutionKind::P8:
    case EvolutionKind::P16: {
      const seq::PulseSequence s = make_sequence(config, config.direction);
      const Matrix u_c = seq::cycle_propagator(s, system);
      const int k = stroboscopic_index(t, s.cycle_time);
      Matrix a = iz;
      for (int c = 0; c < k; ++c) a = u_c.adjoint() * a * u_c;
      return a;
    }
  }
  throw ValidationError("evolved_iz: unknown evolution kind");
}

SignalCurve magnetization_decay(const SpinSystem& system, const SequenceConfig& config,
                                const std::vector<double>& times) {
  SignalCurve curve;
  curve.times = times;
  curve.meta = make_meta(system, config, "decay");
  curve.self_times.resize(times.size());
  const double delta_eff =
      config.kind == EvolutionKind::magic_echo ? -0.5 : config.delta;
  for (std::size_t i = 0; i < times.size(); ++i) {
    curve.self_times[i] = delta_eff * times[i];
  }

  const Matrix iz = collective_operator(system, Axis::z);
  const double norm = iz_norm(system);

  if (config.kind == EvolutionKind::ideal ||
      (config.kind == EvolutionKind::magic_echo && config.drive_amplitude <= 0.0)) {
    curve.values = ideal_correlator_curve(system, ideal_generator(system, config), times);
    return curve;
  }

  if (pulsed_cycle_kind(config.kind)) {
    const seq::PulseSequence s = make_sequence(config, config.direction);
    const Matrix u_c = seq::cycle_propagator(s, system);
    std::vector<int> cycle_index(times.size());
    int k_max = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      cycle_index[i] = stroboscopic_index(times[i], s.cycle_time);
      k_max = std::max(k_max, cycle_index[i]);
    }
    curve.values.assign(times.size(), 0.0);
    Matrix a = iz;
    for (int k = 0; k <= k_max; ++k) {
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (cycle_index[i] == k) {
          curve.values[i] =
              kernels::conj_dot(a.data(), iz.data(), a.size()).real() / norm;
        }
      }
      if (k < k_max) a = (u_c.adjoint() * a * u_c).eval();
    }
    return curve;
  }

  // free evolution / microscopic magic echo: independent time points
  const seq::PulseSequence s = make_sequence(config, seq::Direction::none);
  curve.values.assign(times.size(), 0.0);
  parallel_for(times.size(), [&](std::size_t i) {
    const Matrix u =
        seq::propagator_for_elements(s.elements_for_time(times[i]), system, s.error);
    const Matrix a = u.adjoint() * iz * u;
    curve.values[i] = kernels::conj_dot(a.data(), iz.data(), a.size()).real() / norm;
  });
  return curve;
}

SignalCurve loschmidt_echo(const SpinSystem& system, const SequenceConfig& config,
                           const std::vector<double>& times) {
  SignalCurve curve;
  curve.times = times;
  curve.meta = make_meta(system, config, "echo");
  curve.self_times.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    curve.self_times[i] = config.delta * times[i];
  }
  const Matrix iz = collective_operator(system, Axis::z);
  const double norm = iz_norm(system);

  if (config.kind == EvolutionKind::ideal) {
    // H_B = -H_F exactly: the reversal is perfect up to rounding
    const Propagator prop(ideal_generator(system, config));
    curve.values.assign(times.size(), 0.0);
    parallel_for(times.size(), [&](std::size_t i) {
      const Matrix c = prop.unitary(-times[i]) * prop.unitary(times[i]);
      const Matrix a = c.adjoint() * iz * c;
      curve.values[i] = kernels::conj_dot(a.data(), iz.data(), a.size()).real() / norm;
    });
    return curve;
  }
  if (!pulsed_cycle_kind(config.kind)) {
    throw ValidationError("loschmidt_echo needs a forward/backward pulse pair "
                          "(P8 or P16) or ideal evolution");
  }

  const seq::PulseSequence sf = make_sequence(config, seq::Direction::forward);
  const seq::PulseSequence sb = make_sequence(config, seq::Direction::backward);
  const Matrix u_f = seq::cycle_propagator(sf, system);
  const Matrix u_b = seq::cycle_propagator(sb, system);

  std::vector<int> cycle_index(times.size());
  int k_max = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    cycle_index[i] = stroboscopic_index(times[i], sf.cycle_time);
    k_max = std::max(k_max, cycle_index[i]);
  }
  curve.values.assign(times.size(), 0.0);
  const std::size_t dim = system.dim();
  Matrix f_k = Matrix::Identity(dim, dim);
  Matrix b_k = Matrix::Identity(dim, dim);
  for (int k = 0; k <= k_max; ++k) {
    bool wanted = false;
    for (int idx : cycle_index) wanted |= (idx == k);
    if (wanted) {
      const Matrix c = b_k * f_k;  // e^{-itH_B} e^{-itH_F}
      const Matrix a = c.adjoint() * iz * c;
      const double m = kernels::conj_dot(a.data(), iz.data(), a.size()).real() / norm;
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (cycle_index[i] == k) curve.values[i] = m;
      }
    }
    if (k < k_max) {
      f_k = (u_f * f_k).eval();
      b_k = (u_b * b_k).eval();
    }
  }
  return curve;
}

double MQCSpectrum::at_order(int q) const {
  const int i = q + q_steps / 2;
  if (i < 0 || i >= static_cast<int>(s_q.size())) return 0.0;
  return s_q[i];
}

std::vector<double> coherence_order_weights(const SpinSystem& system, const Matrix& a) {
  const int n = system.n_spins();
  const std::size_t dim = system.dim();
  std::vector<double> w(2 * n + 1, 0.0);
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t r = 0; r < dim; ++r) {
      const int q = (twice_magnetic_quantum(static_cast<std::uint32_t>(r), n) -
                     twice_magnetic_quantum(static_cast<std::uint32_t>(s), n)) / 2;
      w[q + n] += std::norm(a(r, s));
    }
  }
  const double norm = iz_norm(system);
  for (double& x : w) x /= norm;
  return w;
}

MQCSpectrum mqc_spectrum(const SpinSystem& system, const SequenceConfig& config,
                         double t, int q_steps) {
  if (q_steps < 4 || q_steps % 2 != 0) {
    throw ValidationError("q_steps must be an even number of at least 4");
  }
  const Matrix a = evolved_iz(system, config, t);
  const double norm = iz_norm(system);

  // exact binning diagnostic: refuse aliased encodings up front
  const std::vector<double> w = coherence_order_weights(system, a);
  int max_order = 0;
  for (int q = -system.n_spins(); q <= system.n_spins(); ++q) {
    if (w[q + system.n_spins()] > 1e-12 && std::abs(q) > max_order) max_order = std::abs(q);
  }
  if (2 * max_order >= q_steps) {
    throw ComputeError("MQC aliasing: detected maximum coherence order " +
                       std::to_string(max_order) + ", need q_steps > " +
                       std::to_string(2 * max_order));
  }

  MQCSpectrum spec;
  spec.time = t;
  spec.q_steps = q_steps;
  spec.s_phi.assign(q_steps, 0.0);

  const std::size_t dim = system.dim();
  Eigen::VectorXd half_m(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    half_m(b) = 0.5 * twice_magnetic_quantum(static_cast<std::uint32_t>(b),
                                             system.n_spins());
  }
  parallel_for(q_steps, [&](std::size_t idx) {
    const double phi = kTwoPi * static_cast<double>(idx + 1) / q_steps;
    Eigen::VectorXcd phases(dim);
    for (std::size_t b = 0; b < dim; ++b) phases(b) = std::exp(kImag * phi * half_m(b));
    Matrix rotated(dim, dim);
    kernels::phase_conjugate(rotated.data(), a.data(), phases.data(), dim);
    spec.s_phi[idx] = kernels::conj_dot(a.data(), rotated.data(), a.size()).real() / norm;
  });

  // DFT with 1/Q so that sum_q S_q = S_{phi = 0}
  spec.s_q.assign(q_steps, 0.0);
  for (int i = 0; i < q_steps; ++i) {
    const int q = i - q_steps / 2;
    cxd acc = 0.0;
    for (int n = 1; n <= q_steps; ++n) {
      const double phi = kTwoPi * n / q_steps;
      acc += std::exp(kImag * (q * phi)) * spec.s_phi[n - 1];
    }
    spec.s_q[i] = acc.real() / q_steps;
  }

  if (std::abs(spec.s_q.front()) > 1e-6) {
    throw ComputeError("MQC aliasing: weight " + std::to_string(spec.s_q.front()) +
                       " at the folding order |q| = Q/2");
  }
  spec.second_moment = otoc_second_moment(spec);
  return spec;
}

double otoc_second_moment(const MQCSpectrum& spectrum) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spectrum.s_q.size(); ++i) {
    const double q = spectrum.order_of(i);
    sum += q * q * spectrum.s_q[i];
  }
  return sum;
}

double second_moment_phase_curvature(const MQCSpectrum& spectrum) {
  // S_phi samples sit at phi_n = 2 pi n / Q, n = 1..Q; phi = 0 is n = Q.
  const int q = spectrum.q_steps;
  const double h = kTwoPi / q;
  const double s0 = spectrum.s_phi[q - 1];
  const double s_plus = spectrum.s_phi[0];
  const double s_minus = spectrum.s_phi[q - 2];
  return -(s_plus - 2.0 * s0 + s_minus) / (h * h);
}

double direct_oto_commutator(const SpinSystem& system, const Matrix& iz_t) {
  const Matrix iz = collective_operator(system, Axis::z);
  const Matrix c = iz * iz_t - iz_t * iz;
  return kernels::conj_dot(c.data(), c.data(), c.size()).real() / iz_norm(system);
}

double direct_oto_commutator(const SpinSystem& system, const Matrix& hamiltonian,
                             double t) {
  const Matrix iz = collective_operator(system, Axis::z);
  const Matrix iz_t = Propagator(hamiltonian).evolve(iz, t);
  return direct_oto_commutator(system, iz_t);
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& pts, double x) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const auto& p, double v) { return p.first < v; });
  if (it == pts.begin()) return it->second;
  if (it == pts.end()) return (it - 1)->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (hi.first == lo.first) return lo.second;
  const double f = (x - lo.first) / (hi.first - lo.first);
  return lo.second + f * (hi.second - lo.second);
}

}  // namespace

CollapseReport self_time_collapse(const std::vector<SignalCurve>& curves,
                                  std::size_t grid_points) {
  if (curves.size() < 2) {
    throw ValidationError("self_time_collapse needs at least two curves");
  }
  std::vector<std::vector<std::pair<double, double>>> pts(curves.size());
  double lo = -1e300, hi = 1e300;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& cur = curves[c];
    if (cur.self_times.size() != cur.values.size() || cur.values.empty()) {
      throw ValidationError("self_time_collapse: malformed curve");
    }
    for (std::size_t i = 0; i < cur.values.size(); ++i) {
      pts[c].emplace_back(cur.self_times[i], cur.values[i]);
    }
    std::sort(pts[c].begin(), pts[c].end());
    lo = std::max(lo, pts[c].front().first);
    hi = std::min(hi, pts[c].back().first);
  }
  if (!(hi > lo)) {
    throw ValidationError("self_time_collapse: self-time ranges do not overlap");
  }
  CollapseReport report;
  report.self_time_min = lo;
  report.self_time_max = hi;
  report.grid_points = grid_points;
  double spread_sum = 0.0;
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) / (grid_points - 1);
    double vmin = 1e300, vmax = -1e300;
    for (const auto& p : pts) {
      const double v = interpolate(p, x);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    const double spread = vmax - vmin;
    report.max_spread = std::max(report.max_spread, spread);
    spread_sum += spread;
  }
  report.mean_spread = spread_sum / grid_points;
  return report;
}

SignalCurve normalized_by_reference(const SignalCurve& curve, const SignalCurve& reference) {
  if (curve.times.size() != reference.times.size()) {
    throw ValidationError("normalized_by_reference: grids differ in length");
  }
  SignalCurve out = curve;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (std::abs(curve.times[i] - reference.times[i]) >
        1e-9 * std::max(1.0, std::abs(curve.times[i]))) {
      throw ValidationError("normalized_by_reference: time grids do not match");
    }
    out.values[i] = curve.values[i] / reference.values[i];
  }
  out.meta.protocol = curve.meta.protocol + "_normalized";
  return out;
}

}  // namespace spinscale::proto
