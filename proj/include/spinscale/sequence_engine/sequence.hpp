#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinscale/sequence_engine/pulse.hpp"
#include "spinscale/sequence_engine/toggling.hpp"
#include "spinscale/types.hpp"

namespace spinscale::seq {

enum class Kind { P8, P16, free_evolution, magic_echo };
enum class Direction { forward, backward, none };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);
std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name);

// A pulse train with cycle metadata. P8/P16 hold one concrete cycle
// (stroboscopic use: raise the cycle propagator to a power). free_evolution
// and magic_echo are parametric: their element list depends on the total
// evolution time, produced by elements_for_time().
struct PulseSequence {
  Kind kind = Kind::P8;
  Direction direction = Direction::forward;
  double delta = 0.0;
  double tau = 0.0;         // s; base delay for P8/P16
  double cycle_time = 0.0;  // s; 12 tau for P8, 24 tau for P16
  std::vector<Element> elements;
  ErrorModel error;
  std::vector<int> phase_quarters;  // ideal pulse phases, pi/2 units
  double drive_amplitude = 0.0;     // rad/s; magic_echo microscopic model

  bool parametric() const {
    return kind == Kind::free_evolution || kind == Kind::magic_echo;
  }

  // Element list for the parametric kinds at total time t.
  std::vector<Element> elements_for_time(double t) const;
};

struct BuildOptions {
  double min_separation = 1e-6;     // s between consecutive pulse edges
  double drive_amplitude = 0.0;     // magic_echo: 0 selects the idealized entry
  bool verify = true;               // numeric zeroth-order check on a probe system
};

// The interpulse gaps of the 8-pulse cycle, in units of the two delay values
//   F: D1 = tau (1 - delta), D2 = tau (1 + 2 delta)
//   B: D1 = tau (1 + delta), D2 = tau (1 - 2 delta)
// arranged palindromically so the pi-shifted 16-pulse extension is
// time-symmetric (odd Magnus orders cancel):
//   [D1/2, 2 D1, D1, 2 D2, D1, 2 D2, D1, 2 D1, D1/2]   (sums to 12 tau)
std::vector<double> p8_gap_pattern(double delta, double tau, Direction dir);

void delay_values(double delta, double tau, Direction dir, double& d1, double& d2);

// Interleaves gaps and ideal pi/2 pulses: gaps.size() == phases.size() + 1.
std::vector<Element> assemble_pulse_train(const std::vector<double>& gaps,
                                          const std::vector<int>& phase_quarters);

// Assembles a sequence, checks the scaling bounds and minimum pulse
// separation, applies the error model, and (for P8/P16 with ideal pulses)
// verifies the zeroth-order average Hamiltonian on a probe system.
PulseSequence build_sequence(Kind kind, double delta, double tau, Direction dir,
                             const ErrorModel& error = {},
                             const BuildOptions& options = {});

// Copies the sequence with the perturbations applied (identically for any
// direction): flip angles scaled by 1 + eps, phases offset, ideal pulses
// widened to pulse_width with the time carved out of the adjacent delays.
PulseSequence apply_error_model(const PulseSequence& ideal, const ErrorModel& error);

}  // namespace spinscale::seq
