#include "spinscale/sequence_engine/sequence.hpp"

#include <cmath>

#include "spinscale/sequence_engine/average.hpp"
#include "spinscale/sequence_engine/registry.hpp"

namespace spinscale::seq {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::P8: return "P8";
    case Kind::P16: return "P16";
    case Kind::free_evolution: return "free";
    case Kind::magic_echo: return "magic_echo";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "P8") return Kind::P8;
  if (name == "P16") return Kind::P16;
  if (name == "free") return Kind::free_evolution;
  if (name == "magic_echo") return Kind::magic_echo;
  throw ValidationError("unknown sequence kind '" + name + "'");
}

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::forward: return "F";
    case Direction::backward: return "B";
    case Direction::none: return "none";
  }
  return "?";
}

Direction direction_from_name(const std::string& name) {
  if (name == "F") return Direction::forward;
  if (name == "B") return Direction::backward;
  if (name == "none") return Direction::none;
  throw ValidationError("unknown direction '" + name + "'");
}

void delay_values(double delta, double tau, Direction dir, double& d1, double& d2) {
  if (dir == Direction::forward) {
    d1 = tau * (1.0 - delta);
    d2 = tau * (1.0 + 2.0 * delta);
  } else {
    d1 = tau * (1.0 + delta);
    d2 = tau * (1.0 - 2.0 * delta);
  }
}

std::vector<double> p8_gap_pattern(double delta, double tau, Direction dir) {
  double d1 = 0.0, d2 = 0.0;
  delay_values(delta, tau, dir, d1, d2);
  return {0.5 * d1, 2.0 * d1, d1, 2.0 * d2, d1, 2.0 * d2, d1, 2.0 * d1, 0.5 * d1};
}

std::vector<Element> assemble_pulse_train(const std::vector<double>& gaps,
                                          const std::vector<int>& phase_quarters) {
  if (gaps.size() != phase_quarters.size() + 1) {
    throw ValidationError("assemble_pulse_train: need pulses + 1 gaps");
  }
  std::vector<Element> elements;
  elements.reserve(gaps.size() + phase_quarters.size());
  for (std::size_t k = 0; k < phase_quarters.size(); ++k) {
    elements.push_back(Element::make_delay(gaps[k]));
    elements.push_back(Element::make_pulse(phase_quarters[k] * kPi / 2.0, kPi / 2.0));
  }
  elements.push_back(Element::make_delay(gaps.back()));
  return elements;
}

std::vector<Element> PulseSequence::elements_for_time(double t) const {
  if (!parametric()) {
    throw ValidationError("elements_for_time: sequence is not parametric");
  }
  if (t < 0.0) throw ValidationError("negative evolution time");
  std::vector<Element> base;
  if (kind == Kind::free_evolution) {
    // pi/2, free half, pi at half-time (refocuses Zeeman), free half, pi/2;
    // all about +x so the pulse product closes the toggling frame.
    base.push_back(Element::make_pulse(0.0, kPi / 2.0));
    base.push_back(Element::make_delay(0.5 * t));
    base.push_back(Element::make_pulse(0.0, kPi));
    base.push_back(Element::make_delay(0.5 * t));
    base.push_back(Element::make_pulse(0.0, kPi / 2.0));
  } else {
    if (drive_amplitude <= 0.0) {
      throw ValidationError(
          "magic_echo: idealized entry has no pulse elements; "
          "set a drive amplitude for the microscopic model");
    }
    // Phase-alternated on-resonance lock: the net drive rotation cancels and
    // the internal Hamiltonian averages to -(1/2) H_d^x.
    if (t > 0.0) {
      base.push_back(Element::make_pulse(0.0, drive_amplitude * 0.5 * t, 0.5 * t));
      base.push_back(Element::make_pulse(kPi, drive_amplitude * 0.5 * t, 0.5 * t));
    }
  }
  // Apply flip/phase errors (pulse widths only make sense for the delta
  // pulses of the free sequence).
  for (Element& e : base) {
    if (e.type != Element::Type::pulse) continue;
    if (e.pulse.duration == 0.0) {
      e.pulse.flip_angle *= 1.0 + error.flip_angle_error;
      e.pulse.phase += error.phase_offset;
    }
  }
  return base;
}

namespace {

void check_gaps(const std::vector<Element>& elements, double min_separation) {
  // Separation is measured pulse edge to pulse edge: consecutive delays add
  // up, and the leading/trailing windows join across the cycle boundary.
  std::vector<double> separations;
  double gap = 0.0;
  double leading = -1.0;
  for (const Element& e : elements) {
    if (e.type == Element::Type::delay) {
      if (e.delay < -1e-15) throw ValidationError("negative delay in pulse sequence");
      gap += e.delay;
    } else {
      if (leading < 0.0) {
        leading = gap;
      } else {
        separations.push_back(gap);
      }
      gap = 0.0;
    }
  }
  if (leading >= 0.0) separations.push_back(gap + leading);  // wraparound
  for (double s : separations) {
    if (s + 1e-15 < min_separation) {
      throw ValidationError("minimum pulse separation violated (" +
                            std::to_string(s * 1e6) + " us between pulses < " +
                            std::to_string(min_separation * 1e6) + " us)");
    }
  }
}

}  // namespace

PulseSequence apply_error_model(const PulseSequence& ideal, const ErrorModel& error) {
  PulseSequence out = ideal;
  out.error = error;
  if (out.parametric()) return out;  // handled inside elements_for_time
  auto& el = out.elements;
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (el[i].type != Element::Type::pulse) continue;
    el[i].pulse.flip_angle *= 1.0 + error.flip_angle_error;
    el[i].pulse.phase += error.phase_offset;
    if (error.pulse_width > 0.0) {
      el[i].pulse.duration = error.pulse_width;
      // keep the cycle time at 12 tau: each edge eats width/2 from a delay
      if (i > 0 && el[i - 1].type == Element::Type::delay) {
        el[i - 1].delay -= 0.5 * error.pulse_width;
      }
      if (i + 1 < el.size() && el[i + 1].type == Element::Type::delay) {
        el[i + 1].delay -= 0.5 * error.pulse_width;
      }
    }
  }
  if (error.pulse_width > 0.0) {
    for (const Element& e : el) {
      if (e.type == Element::Type::delay && e.delay < -1e-15) {
        throw ValidationError("pulse width exceeds the available delay");
      }
    }
  }
  return out;
}

PulseSequence build_sequence(Kind kind, double delta, double tau, Direction dir,
                             const ErrorModel& error, const BuildOptions& options) {
  PulseSequence seq;
  seq.kind = kind;
  seq.error = error;

  if (kind == Kind::free_evolution) {
    if (std::abs(delta - 1.0) > 1e-12) {
      throw ValidationError("free evolution fixes delta = 1");
    }
    seq.delta = 1.0;
    seq.direction = Direction::none;
    return seq;
  }
  if (kind == Kind::magic_echo) {
    if (std::abs(delta + 0.5) > 1e-12) {
      throw ValidationError("magic echo fixes delta = -1/2");
    }
    seq.delta = -0.5;
    seq.direction = Direction::none;
    seq.drive_amplitude = options.drive_amplitude;
    return seq;
  }

  if (dir == Direction::none) {
    throw ValidationError("P8/P16 sequences need a forward or backward direction");
  }
  if (dir == Direction::forward && (delta < 0.0 || delta >= 1.0)) {
    throw ValidationError("forward scaling must lie in [0, 1)");
  }
  if (dir == Direction::backward && delta > 0.5) {
    throw ValidationError("backward scaling exceeds 1/2");
  }
  if (dir == Direction::backward && delta < 0.0) {
    throw ValidationError("backward scaling must lie in [0, 1/2]");
  }
  if (tau <= 0.0) throw ValidationError("tau must be positive");

  seq.delta = delta;
  seq.tau = tau;
  seq.direction = dir;
  seq.phase_quarters = canonical_phases(dir).quarters;
  seq.elements = assemble_pulse_train(p8_gap_pattern(delta, tau, dir), seq.phase_quarters);
  seq.cycle_time = 12.0 * tau;
  if (kind == Kind::P16) {
    // repeat with all pulses pi-shifted; cancels odd Magnus orders.
    // phase_quarters keeps the 8-pulse base pattern.
    std::vector<Element> second = seq.elements;
    for (Element& e : second) {
      if (e.type == Element::Type::pulse) e.pulse.phase += kPi;
    }
    seq.elements.insert(seq.elements.end(), second.begin(), second.end());
    seq.cycle_time = 24.0 * tau;
  }

  check_gaps(seq.elements, options.min_separation);

  if (options.verify) verify_sequence(seq);

  return apply_error_model(seq, error);
}

}  // namespace spinscale::seq
