#pragma once

#include "spinscale/spin_core/spin_system.hpp"
#include "spinscale/types.hpp"

namespace spinscale {

// I_i^alpha for a single spin embedded in the full 2^N space.
Matrix single_spin_operator(const SpinSystem& system, int spin, Axis axis);

// I^alpha = sum_i I_i^alpha.
Matrix collective_operator(const SpinSystem& system, Axis axis);

// Global rotation exp(-i angle * (cos(phase) I^x + sin(phase) I^y)) built as a
// tensor product of 2x2 rotations; exact for ideal delta pulses.
Matrix global_xy_rotation(const SpinSystem& system, double phase, double angle);

// Collective z-rotation exp(-i phi I^z); diagonal in the computational basis.
Matrix global_z_rotation(const SpinSystem& system, double phi);

// Tr[(I^z)^2] = N 2^N / 4, the normalization shared by every correlator.
double iz_norm(const SpinSystem& system);

// Tr[A B] / Tr[(I^z)^2] for Hermitian A (so Tr[A B] = Tr[A^dag B], which the
// kernel layer evaluates as a flat conjugated dot product).
double correlator(const Matrix& a, const Matrix& b, const SpinSystem& system);

// max |A - A^dag| elementwise.
double hermiticity_defect(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = 1e-12);

void require_hermitian(const Matrix& a, const char* what);

}  // namespace spinscale
