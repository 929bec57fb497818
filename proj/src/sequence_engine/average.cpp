#include "spinscale/sequence_engine/average.hpp"

#include <cmath>
#include <map>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/spin_core/operators.hpp"
#include "spinscale/spin_core/propagator.hpp"

namespace spinscale::seq {

Matrix internal_hamiltonian(const SpinSystem& system, const ErrorModel& error) {
  Matrix h = ham::dipolar_secular(system, Axis::z);
  RealVector omega = system.zeeman_offsets();
  if (error.zeeman_offset != 0.0) {
    omega.array() += error.zeeman_offset;
  }
  if (omega.cwiseAbs().maxCoeff() > 0.0) {
    h += ham::zeeman(system.with_zeeman_offsets(omega));
  }
  return h;
}

Matrix propagator_for_elements(const std::vector<Element>& elements,
                               const SpinSystem& system, const ErrorModel& error) {
  const Matrix h_int = internal_hamiltonian(system, error);
  const Propagator free_prop(h_int);
  const std::size_t dim = system.dim();
  Matrix u = Matrix::Identity(dim, dim);
  // finite-width pulses need exp(-i (H_int + H_rf) w); cache per (phase, amp, w)
  std::map<std::tuple<double, double, double>, Matrix> burst_cache;
  for (const Element& e : elements) {
    if (e.type == Element::Type::delay) {
      if (e.delay == 0.0) continue;
      u = free_prop.unitary(e.delay) * u;
    } else if (e.pulse.duration == 0.0) {
      u = global_xy_rotation(system, e.pulse.phase, e.pulse.flip_angle) * u;
    } else {
      const double amp = e.pulse.rf_amplitude();
      const auto key = std::make_tuple(e.pulse.phase, amp, e.pulse.duration);
      auto it = burst_cache.find(key);
      if (it == burst_cache.end()) {
        const Matrix h_rf =
            amp * (std::cos(e.pulse.phase) * collective_operator(system, Axis::x) +
                   std::sin(e.pulse.phase) * collective_operator(system, Axis::y));
        it = burst_cache.emplace(key, expm_unitary(h_int + h_rf, e.pulse.duration)).first;
      }
      u = it->second * u;
    }
  }
  return u;
}

Matrix cycle_propagator(const PulseSequence& sequence, const SpinSystem& system) {
  if (sequence.parametric()) {
    throw ValidationError("cycle_propagator: parametric sequence, use elements_for_time");
  }
  return propagator_for_elements(sequence.elements, system, sequence.error);
}

Matrix numeric_average_hamiltonian(const std::vector<Element>& elements,
                                   const SpinSystem& system, const ErrorModel& error,
                                   int order) {
  if (order != 0 && order != 1) {
    throw ValidationError("numeric_average_hamiltonian: order must be 0 or 1");
  }
  const Matrix h_int = internal_hamiltonian(system, error);
  const std::size_t dim = system.dim();

  std::vector<Matrix> toggled;
  std::vector<double> dwell;
  Matrix q = Matrix::Identity(dim, dim);
  double t_c = 0.0;
  for (const Element& e : elements) {
    if (e.type == Element::Type::pulse) {
      if (e.pulse.duration != 0.0) {
        throw ValidationError(
            "numeric_average_hamiltonian: finite-width pulses have no "
            "piecewise toggling frame; use cycle_propagator comparison instead");
      }
      q = global_xy_rotation(system, e.pulse.phase, e.pulse.flip_angle) * q;
    } else if (e.delay > 0.0) {
      toggled.push_back(q.adjoint() * h_int * q);
      dwell.push_back(e.delay);
      t_c += e.delay;
    }
  }
  if (t_c <= 0.0) throw ValidationError("numeric_average_hamiltonian: zero cycle time");

  if (order == 0) {
    Matrix h0 = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < toggled.size(); ++k) h0 += dwell[k] * toggled[k];
    return h0 / t_c;
  }
  Matrix h1 = Matrix::Zero(dim, dim);
  for (std::size_t l = 1; l < toggled.size(); ++l) {
    for (std::size_t k = 0; k < l; ++k) {
      const Matrix comm = toggled[l] * toggled[k] - toggled[k] * toggled[l];
      h1 += dwell[k] * dwell[l] * comm;
    }
  }
  return (-kImag / (2.0 * t_c)) * h1;
}

Matrix numeric_average_hamiltonian(const PulseSequence& sequence,
                                   const SpinSystem& system, int order) {
  if (sequence.parametric()) {
    throw ValidationError("numeric_average_hamiltonian: parametric sequence");
  }
  return numeric_average_hamiltonian(sequence.elements, system, sequence.error, order);
}

double average_hamiltonian_residual(const std::vector<Element>& elements,
                                    const SpinSystem& system, const ErrorModel& error) {
  const SymbolicAverage sym = symbolic_average_of(elements);
  const Matrix h0 = numeric_average_hamiltonian(elements, system, error, 0);
  Matrix predicted = sym.c_y * ham::dipolar_secular(system, Axis::y) +
                     sym.c_z * ham::dipolar_secular(system, Axis::z);
  RealVector omega = system.zeeman_offsets();
  if (error.zeeman_offset != 0.0) omega.array() += error.zeeman_offset;
  for (int a = 0; a < 3; ++a) {
    if (sym.zeeman_residual[a] == 0.0) continue;
    Matrix axis_op = Matrix::Zero(system.dim(), system.dim());
    for (int i = 0; i < system.n_spins(); ++i) {
      axis_op -= omega(i) * single_spin_operator(system, i, static_cast<Axis>(a));
    }
    predicted += sym.zeeman_residual[a] * axis_op;
  }
  const double scale = ham::dipolar_secular(system, Axis::y).norm();
  return (h0 - predicted).norm() / scale;
}

const SpinSystem& probe_system() {
  // Small cluster with non-uniform offsets, so both a wrong dipolar average
  // and an unrefocused Zeeman term show up in the residual.
  static const SpinSystem probe = [] {
    SpinSystem s = SpinSystem::random_cluster(4, 1000.0, 0xA11CEu);
    RealVector omega(4);
    omega << 400.0, -250.0, 130.0, 75.0;
    return s.with_zeeman_offsets(omega);
  }();
  return probe;
}

double sequence_h0_residual(const PulseSequence& sequence) {
  const SpinSystem& probe = probe_system();
  const Matrix h0 = numeric_average_hamiltonian(sequence.elements, probe, ErrorModel{}, 0);
  const double sign = sequence.direction == Direction::backward ? -1.0 : 1.0;
  const Matrix target = sign * sequence.delta * ham::dipolar_secular(probe, Axis::y);
  return (h0 - target).norm() / ham::dipolar_secular(probe, Axis::y).norm();
}

void verify_sequence(const PulseSequence& sequence) {
  if (sequence_h0_residual(sequence) > 1e-10) {
    throw ComputeError("sequence verification failed: zeroth-order average "
                       "Hamiltonian does not match the scaling target");
  }
}

}  // namespace spinscale::seq
