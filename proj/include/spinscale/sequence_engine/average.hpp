#pragma once

#include "spinscale/sequence_engine/sequence.hpp"
#include "spinscale/spin_core/spin_system.hpp"
#include "spinscale/types.hpp"

namespace spinscale::seq {

// Internal Hamiltonian the sequence acts on: secular dipolar (z) plus Zeeman,
// including the error model's uniform offset.
Matrix internal_hamiltonian(const SpinSystem& system, const ErrorModel& error);

// Ordered product of pulse and delay unitaries over one cycle (P8/P16) or
// over the full element list for a parametric sequence at time t.
Matrix cycle_propagator(const PulseSequence& sequence, const SpinSystem& system);
Matrix propagator_for_elements(const std::vector<Element>& elements,
                               const SpinSystem& system, const ErrorModel& error);

// Piecewise toggling-frame Magnus terms for ideal delta pulses:
//   H0 = (1/t_c) sum_k Delta_k Htilde_k
//   H1 = (-i / 2 t_c) sum_{k<l} Delta_k Delta_l [Htilde_l, Htilde_k]
// Throws ValidationError for finite-width pulses
// ("use cycle_propagator comparison instead").
Matrix numeric_average_hamiltonian(const PulseSequence& sequence,
                                   const SpinSystem& system, int order);
Matrix numeric_average_hamiltonian(const std::vector<Element>& elements,
                                   const SpinSystem& system, const ErrorModel& error,
                                   int order);

// ||H0_num - (c_y H_d^y + c_z H_d^z + zeeman residual)|| / ||H_d^y|| on the
// given system; the residual of the symbolic prediction.
double average_hamiltonian_residual(const std::vector<Element>& elements,
                                    const SpinSystem& system, const ErrorModel& error);

// ||H0_num - (+-delta) H_d^y|| / ||H_d^y|| on the fixed 4-spin probe system
// (nonzero offsets, so an unrefocused Zeeman term also shows up).
double sequence_h0_residual(const PulseSequence& sequence);

// Numeric zeroth-order check used by build_sequence; throws if the residual
// exceeds 1e-10.
void verify_sequence(const PulseSequence& sequence);

// The probe system shared by verification and canonical-phase synthesis.
const SpinSystem& probe_system();

}  // namespace spinscale::seq
