#pragma once

#include <vector>

#include "spinscale/types.hpp"

namespace spinscale::seq {

// One r.f. pulse. Phase is the angle of the rotation axis in the xy-plane
// (0 = +x, pi/2 = +y, ...). duration == 0 models an ideal delta pulse;
// a finite duration turns the pulse into evolution under the internal
// Hamiltonian plus a drive of amplitude flip_angle / duration.
struct Pulse {
  double phase = 0.0;       // rad
  double flip_angle = 0.0;  // rad
  double duration = 0.0;    // s

  double rf_amplitude() const { return duration > 0.0 ? flip_angle / duration : 0.0; }
};

struct Element {
  enum class Type { pulse, delay };
  Type type = Type::delay;
  Pulse pulse{};
  double delay = 0.0;  // s, for Type::delay

  static Element make_pulse(double phase, double flip_angle, double duration = 0.0) {
    Element e;
    e.type = Type::pulse;
    e.pulse = Pulse{phase, flip_angle, duration};
    return e;
  }
  static Element make_delay(double d) {
    Element e;
    e.type = Type::delay;
    e.delay = d;
    return e;
  }
};

// Control imperfections, applied identically to forward and backward
// sequences so that scaling comparisons see the same error budget.
struct ErrorModel {
  double flip_angle_error = 0.0;  // multiplicative: angle -> angle * (1 + eps)
  double phase_offset = 0.0;      // rad added to every pulse phase
  double pulse_width = 0.0;       // s; carved out of the adjacent delays
  double zeeman_offset = 0.0;     // rad/s added uniformly to all spins

  bool is_ideal() const {
    return flip_angle_error == 0.0 && phase_offset == 0.0 && pulse_width == 0.0 &&
           zeeman_offset == 0.0;
  }
};

}  // namespace spinscale::seq
