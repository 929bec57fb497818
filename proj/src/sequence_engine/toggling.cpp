#include "spinscale/sequence_engine/toggling.hpp"

#include <cmath>

namespace spinscale::seq {

FrameRotation FrameRotation::identity() {
  FrameRotation r;
  r.m = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  return r;
}

FrameRotation FrameRotation::quarter_pulse(int phase_quarter, int flip_quarter) {
  // Quarter-turn adjoint tables for P = exp(-i (pi/2) n.I):
  //   +x: x->x,  y->-z, z->+y
  //   +y: x->+z, y->y,  z->-x
  //   -x: x->x,  y->+z, z->-y
  //   -y: x->-z, y->y,  z->+x
  static const std::array<FrameRotation, 4> quarter = [] {
    std::array<FrameRotation, 4> q{};
    q[0].m = {{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}};   // +x
    q[1].m = {{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}};   // +y
    q[2].m = {{{1, 0, 0}, {0, 0, 1}, {0, -1, 0}}};   // -x
    q[3].m = {{{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}};   // -y
    return q;
  }();
  FrameRotation r = identity();
  const int p = ((phase_quarter % 4) + 4) % 4;
  int k = ((flip_quarter % 4) + 4) % 4;
  while (k-- > 0) r = quarter[p].compose_after(r);
  return r;
}

FrameRotation FrameRotation::compose_after(const FrameRotation& earlier) const {
  FrameRotation r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s += m[i][k] * earlier.m[k][j];
      r.m[i][j] = s;
    }
  }
  return r;
}

bool FrameRotation::is_identity() const {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (m[i][j] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

void FrameRotation::z_image(int& axis, int& sign) const {
  for (int b = 0; b < 3; ++b) {
    if (m[2][b] != 0) {
      axis = b;
      sign = m[2][b];
      return;
    }
  }
  throw ComputeError("FrameRotation: degenerate z image");
}

namespace {

int quarter_multiple(double angle, const char* what) {
  const double q = angle / (kPi / 2.0);
  const double rounded = std::round(q);
  if (std::abs(q - rounded) > 1e-9) {
    throw ValidationError(std::string("symbolic frame undefined: ") + what +
                          " is not a multiple of pi/2");
  }
  return static_cast<int>(rounded);
}

}  // namespace

TogglingFrame toggling_frame(const std::vector<Element>& elements) {
  TogglingFrame tf;
  tf.frame = FrameRotation::identity();
  for (const Element& e : elements) {
    if (e.type == Element::Type::delay) {
      int axis = 2, sign = 1;
      tf.frame.z_image(axis, sign);
      tf.dipolar_dwell[axis] += e.delay;
      tf.zeeman_dwell[axis] += sign * e.delay;
      tf.total_time += e.delay;
    } else {
      if (e.pulse.duration != 0.0) {
        throw ValidationError("symbolic frame undefined: finite-width pulse");
      }
      const int pq = quarter_multiple(e.pulse.phase, "pulse phase");
      const int fq = quarter_multiple(e.pulse.flip_angle, "flip angle");
      tf.frame = FrameRotation::quarter_pulse(pq, fq).compose_after(tf.frame);
    }
  }
  return tf;
}

SymbolicAverage symbolic_average_of(const std::vector<Element>& elements) {
  const TogglingFrame tf = toggling_frame(elements);
  if (tf.total_time <= 0.0) {
    throw ValidationError("symbolic average: sequence has zero duration");
  }
  SymbolicAverage out;
  for (int a = 0; a < 3; ++a) {
    out.weights[a] = tf.dipolar_dwell[a] / tf.total_time;
    out.zeeman_residual[a] = tf.zeeman_dwell[a] / tf.total_time;
  }
  out.c_y = out.weights[1] - out.weights[0];
  out.c_z = out.weights[2] - out.weights[0];
  out.frame_closed = tf.frame.is_identity();
  return out;
}

}  // namespace spinscale::seq
