#include "spinscale/sequence_engine/search.hpp"

#include <cmath>

namespace spinscale::seq {

std::vector<PhasePattern> search_phase_patterns(const std::vector<double>& gaps,
                                                const PhaseTarget& target) {
  if (gaps.size() < 2) throw ValidationError("search needs at least one pulse");
  const int n_pulses = static_cast<int>(gaps.size()) - 1;
  if (n_pulses > 8) {
    throw ValidationError("search limited to 8 pulses (4^8 candidates)");
  }
  for (double g : gaps) {
    if (g < 0.0) throw ValidationError("negative delay in search pattern");
  }
  double t_c = 0.0;
  for (double g : gaps) t_c += g;
  if (t_c <= 0.0) throw ValidationError("search pattern has zero duration");

  // Precompute the four quarter-turn frame actions once.
  std::array<FrameRotation, 4> quarter{};
  for (int p = 0; p < 4; ++p) quarter[p] = FrameRotation::quarter_pulse(p, 1);

  std::vector<PhasePattern> hits;
  std::vector<int> phases(n_pulses, 0);
  const long total = 1L << (2 * n_pulses);  // 4^P
  for (long code = 0; code < total; ++code) {
    // lexicographic: first pulse is the most significant base-4 digit
    long c = code;
    for (int k = n_pulses - 1; k >= 0; --k) {
      phases[k] = static_cast<int>(c & 3);
      c >>= 2;
    }
    FrameRotation frame = FrameRotation::identity();
    std::array<double, 3> dwell{};
    std::array<double, 3> zdwell{};
    for (int k = 0; k <= n_pulses; ++k) {
      int axis = 2, sign = 1;
      frame.z_image(axis, sign);
      dwell[axis] += gaps[k];
      zdwell[axis] += sign * gaps[k];
      if (k < n_pulses) frame = quarter[phases[k]].compose_after(frame);
    }
    const double c_y = (dwell[1] - dwell[0]) / t_c;
    const double c_z = (dwell[2] - dwell[0]) / t_c;
    if (std::abs(c_y - target.c_y) > 1e-12 || std::abs(c_z - target.c_z) > 1e-12) {
      continue;
    }
    if (std::abs(zdwell[0]) > 1e-12 * t_c || std::abs(zdwell[1]) > 1e-12 * t_c ||
        std::abs(zdwell[2]) > 1e-12 * t_c) {
      continue;
    }
    PhasePattern hit;
    hit.quarters = phases;
    for (int a = 0; a < 3; ++a) {
      hit.average.weights[a] = dwell[a] / t_c;
      hit.average.zeeman_residual[a] = zdwell[a] / t_c;
    }
    hit.average.c_y = c_y;
    hit.average.c_z = c_z;
    hit.average.frame_closed = frame.is_identity();
    hits.push_back(std::move(hit));
  }
  return hits;
}

}  // namespace spinscale::seq
