#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinscale/types.hpp"

namespace spinscale {

// Dense matrices grow as 4^N; past 14 spins a desk machine is out of memory,
// so anything larger is rejected up front instead of thrashing.
inline constexpr int kMaxSpins = 14;

enum class Axis : int { x = 0, y = 1, z = 2 };

enum class GeometryRule { dipolar_angular, isotropic_r3 };

// d_ij = scale * (1 - 3 cos^2 theta_ij) / r_ij^3   (dipolar_angular)
// d_ij = scale / r_ij^3                            (isotropic_r3)
// theta_ij is the angle between r_i - r_j and the z axis.
// Throws ValidationError("degenerate geometry") on coincident positions.
RealMatrix couplings_from_geometry(const std::vector<Eigen::Vector3d>& positions,
                                   double scale, GeometryRule rule);

// A lattice of N spin-1/2 particles: pair couplings d_ij (rad/s, hbar = 1)
// and per-spin resonance offsets omega_i (rad/s). Immutable after
// construction; all operations on it are pure.
class SpinSystem {
 public:
  SpinSystem(int n_spins, RealMatrix couplings, RealVector zeeman_offsets,
             std::optional<std::vector<Eigen::Vector3d>> positions = std::nullopt);

  // Couplings derived from positions via the geometry rule.
  static SpinSystem from_positions(std::vector<Eigen::Vector3d> positions,
                                   double scale, GeometryRule rule);

  // Two spins with a single coupling d.
  static SpinSystem pair(double d);

  // Equispaced chain along z with near-neighbour distance `spacing`.
  static SpinSystem chain(int n, double scale, double spacing = 1.0,
                          GeometryRule rule = GeometryRule::dipolar_angular);

  // n spins at uniformly random positions in a cube of side `side`,
  // resampled until the minimum pairwise distance exceeds 0.4 * side / n^(1/3).
  static SpinSystem random_cluster(int n, double scale, std::uint64_t seed,
                                   double side = 2.0,
                                   GeometryRule rule = GeometryRule::dipolar_angular);

  int n_spins() const { return n_spins_; }
  std::size_t dim() const { return std::size_t{1} << n_spins_; }
  const RealMatrix& couplings() const { return couplings_; }
  const RealVector& zeeman_offsets() const { return zeeman_offsets_; }
  const std::optional<std::vector<Eigen::Vector3d>>& positions() const { return positions_; }

  // Mean |d_ij| over distinct pairs; the natural frequency scale of the lattice.
  double mean_abs_coupling() const;

  SpinSystem with_zeeman_offsets(RealVector omega) const;

 private:
  int n_spins_;
  RealMatrix couplings_;
  RealVector zeeman_offsets_;
  std::optional<std::vector<Eigen::Vector3d>> positions_;
};

// Basis encoding: computational basis index b is an N-bit integer, spin i is
// bit i, a cleared bit means spin-up (m = +1/2).
inline bool spin_is_down(std::uint32_t basis_state, int spin) {
  return (basis_state >> spin) & 1u;
}

// +1 for spin-up, -1 for spin-down; twice the single-spin magnetic quantum number.
inline int spin_sign(std::uint32_t basis_state, int spin) {
  return spin_is_down(basis_state, spin) ? -1 : +1;
}

// Total magnetic quantum number m = (N - 2 * popcount) / 2 in units of 1/2:
// returns 2m, which is always an integer.
inline int twice_magnetic_quantum(std::uint32_t basis_state, int n_spins) {
  return n_spins - 2 * __builtin_popcount(basis_state);
}

}  // namespace spinscale
