#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/sequence_engine/sequence.hpp"
#include "spinscale/spin_core/spin_system.hpp"
#include "spinscale/types.hpp"

namespace spinscale::proto {

// How the scaled evolution is generated: the exact effective Hamiltonian
// delta * H_d^y (ideal), a pulsed cycle (P8/P16), plain free evolution with a
// refocusing pi pulse (delta = 1), or the magic-echo entry (delta = -1/2).
enum class EvolutionKind { ideal, P8, P16, free_evolution, magic_echo };

std::string evolution_kind_name(EvolutionKind k);
EvolutionKind evolution_kind_from_name(const std::string& name);

struct SequenceConfig {
  EvolutionKind kind = EvolutionKind::ideal;
  double delta = 0.0;
  double tau = 2e-6;  // s, P8/P16 only
  seq::Direction direction = seq::Direction::forward;
  seq::ErrorModel error;
  double min_separation = 1e-6;
  double drive_amplitude = 0.0;  // magic_echo: 0 selects the idealized entry
  // ideal evolution only: replaces the default H_d^y generator, still scaled
  // by delta (e.g. the double-quantum contrast Hamiltonian)
  std::optional<ham::HamiltonianSpec> generator;
};

struct CurveMetadata {
  std::string kind;
  std::string direction;
  double delta = 0.0;
  double tau = 0.0;
  int n_spins = 0;
  std::string protocol;
};

struct SignalCurve {
  std::vector<double> times;       // s
  std::vector<double> self_times;  // delta * t
  std::vector<double> values;
  CurveMetadata meta;
};

struct MQCSpectrum {
  double time = 0.0;
  int q_steps = 0;              // Q
  std::vector<double> s_phi;    // S_{phi_n}, n = 1..Q
  std::vector<double> s_q;      // index i holds order q = i - Q/2
  double second_moment = 0.0;   // sum_q q^2 S_q

  int order_of(std::size_t i) const { return static_cast<int>(i) - q_steps / 2; }
  double at_order(int q) const;
};

// Stroboscopic grid 0, t_c, ..., n_cycles * t_c for pulsed kinds; for ideal /
// free / magic-echo evolution the same grid is used so curves stay comparable.
std::vector<double> stroboscopic_times(const SequenceConfig& config, int n_cycles);

// <I^z(t) I^z> under the configured evolution; P(0) = 1.
SignalCurve magnetization_decay(const SpinSystem& system, const SequenceConfig& config,
                                const std::vector<double>& times);

// Tr[e^{itH_F} e^{itH_B} I^z e^{-itH_B} e^{-itH_F} I^z] / Tr[(I^z)^2] with the
// forward and backward blocks at the same delta and tau; M(0) = 1.
SignalCurve loschmidt_echo(const SpinSystem& system, const SequenceConfig& config,
                           const std::vector<double>& times);

// Phase-encoded coherence spectrum at one time: S_phi over Q phase steps,
// DFT with a 1/Q prefactor so sum_q S_q = S_{phi=0}, and the second moment.
// Throws ComputeError when orders at |q| = Q/2 are populated (aliasing).
MQCSpectrum mqc_spectrum(const SpinSystem& system, const SequenceConfig& config,
                         double t, int q_steps);

double otoc_second_moment(const MQCSpectrum& spectrum);

// O(h^2) phase-domain curvature estimate -d^2 S_phi / d phi^2 at phi = 0;
// cross-check for the q-space second moment.
double second_moment_phase_curvature(const MQCSpectrum& spectrum);

// ||[I^z, I^z(t)]||_F^2 / Tr[(I^z)^2] from the evolved operator directly;
// the commutator-side oracle for the spectrum's second moment.
double direct_oto_commutator(const SpinSystem& system, const Matrix& iz_t);
double direct_oto_commutator(const SpinSystem& system, const Matrix& hamiltonian,
                             double t);

// Exact coherence-order weights of an operator by binning |A_rs|^2 over the
// magnetic quantum number difference; independent of the phase-sweep route.
std::vector<double> coherence_order_weights(const SpinSystem& system, const Matrix& a);

// Forward-evolved I^z(t) for the configured evolution (t on the stroboscopic
// grid for pulsed kinds).
Matrix evolved_iz(const SpinSystem& system, const SequenceConfig& config, double t);

struct CollapseReport {
  double max_spread = 0.0;
  double mean_spread = 0.0;
  double self_time_min = 0.0;
  double self_time_max = 0.0;
  std::size_t grid_points = 0;
};

// Interpolates every curve onto a shared self-time grid over the common
// overlap and reports the pointwise spread across curves.
CollapseReport self_time_collapse(const std::vector<SignalCurve>& curves,
                                  std::size_t grid_points = 201);

// Pointwise values / reference.values; grids must agree.
SignalCurve normalized_by_reference(const SignalCurve& curve, const SignalCurve& reference);

}  // namespace spinscale::proto
