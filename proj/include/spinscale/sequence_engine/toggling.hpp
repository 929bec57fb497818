#pragma once

#include <array>
#include <vector>

#include "spinscale/sequence_engine/pulse.hpp"
#include "spinscale/types.hpp"

namespace spinscale::seq {

// Signed axis permutation: one of the 48 hyperoctahedral elements, stored as
// an integer 3x3 matrix M with Q^dag I^a Q = sum_b M_ab I^b for the
// accumulated pulse product Q. Exact arithmetic, so the symbolic average
// Hamiltonian carries no rounding error from the frame itself.
struct FrameRotation {
  std::array<std::array<int, 3>, 3> m{};

  static FrameRotation identity();

  // Adjoint action of an ideal pulse whose phase and flip angle are integer
  // multiples of pi/2; phase_quarter and flip_quarter count those multiples.
  static FrameRotation quarter_pulse(int phase_quarter, int flip_quarter);

  FrameRotation compose_after(const FrameRotation& earlier) const;  // this * earlier
  bool is_identity() const;

  // Image of I^z: axis index 0..2 and sign.
  void z_image(int& axis, int& sign) const;
};

// Per-axis dwell bookkeeping for one cycle.
struct TogglingFrame {
  FrameRotation frame;                      // accumulated element, cycle end
  std::array<double, 3> dipolar_dwell{};    // seconds spent with z mapped to each axis
  std::array<double, 3> zeeman_dwell{};     // signed dwell (sign of the z image)
  double total_time = 0.0;
};

// Result of the exact weight algebra: H0_dipolar = c_y H_d^y + c_z H_d^z
// (after eliminating H_d^x through the axis-sum identity) plus a residual
// collective Zeeman direction that must vanish for a refocusing sequence.
struct SymbolicAverage {
  std::array<double, 3> weights{};         // dipolar dwell fractions (w_x, w_y, w_z)
  std::array<double, 3> zeeman_residual{}; // signed dwell fractions per axis
  double c_y = 0.0;
  double c_z = 0.0;
  bool frame_closed = false;               // full SO(3) identity after the cycle
};

// Walks ideal delta pulses with pi/2-multiple phases and flip angles.
// Throws ValidationError("symbolic frame undefined") otherwise.
TogglingFrame toggling_frame(const std::vector<Element>& elements);

SymbolicAverage symbolic_average_of(const std::vector<Element>& elements);

}  // namespace spinscale::seq
