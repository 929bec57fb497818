#pragma once

#include <vector>

#include "spinscale/sequence_engine/toggling.hpp"
#include "spinscale/types.hpp"

namespace spinscale::seq {

// Dipolar coefficient target for the zeroth-order average Hamiltonian;
// the residual Zeeman dwell is always required to vanish.
struct PhaseTarget {
  double c_y = 0.0;
  double c_z = 0.0;
};

struct PhasePattern {
  std::vector<int> quarters;  // pulse phases, pi/2 units (0=+x 1=+y 2=-x 3=-y)
  SymbolicAverage average;
};

// Exhaustive enumeration of pi/2-pulse phase assignments over {+x,+y,-x,-y}
// for a fixed gap pattern (gaps.size() == pulses + 1, at most 8 pulses).
// Returns every assignment whose symbolic average matches the target to
// 1e-12, in lexicographic order of the phase indices. An empty result is a
// valid answer, not an error.
std::vector<PhasePattern> search_phase_patterns(const std::vector<double>& gaps,
                                                const PhaseTarget& target);

}  // namespace spinscale::seq
