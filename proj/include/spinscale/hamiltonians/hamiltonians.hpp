#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spinscale/spin_core/spin_system.hpp"
#include "spinscale/types.hpp"

namespace spinscale::ham {

// sum_{i<j} d_ij (3 I_i^a I_j^a - I_i . I_j); traceless, Hermitian, and for
// a = z it commutes with I^z (it only connects basis states of equal m).
Matrix dipolar_secular(const SpinSystem& system, Axis axis);

// -sum_i omega_i I_i^z; diagonal in the computational basis.
Matrix zeeman(const SpinSystem& system);

// sum_{i<j} d_ij (I_i^x I_j^x - I_i^y I_j^y); changes coherence order by +-2.
Matrix double_quantum(const SpinSystem& system);

enum class Kind { dipolar_secular, zeeman, double_quantum, composite };

// Serializable recipe for a Hamiltonian: a scaled dipolar term along an axis,
// a Zeeman term, the double-quantum generator, or a scale-weighted sum.
struct HamiltonianSpec {
  Kind kind = Kind::dipolar_secular;
  Axis axis = Axis::z;
  double scale = 1.0;
  std::vector<HamiltonianSpec> terms;  // for composite

  Matrix build(const SpinSystem& system) const;
};

void to_json(nlohmann::json& j, const HamiltonianSpec& spec);
void from_json(const nlohmann::json& j, HamiltonianSpec& spec);

std::string axis_name(Axis a);
Axis axis_from_name(const std::string& name);

}  // namespace spinscale::ham
