#include "spinscale/spin_core/spin_system.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace spinscale {

RealMatrix couplings_from_geometry(const std::vector<Eigen::Vector3d>& positions,
                                   double scale, GeometryRule rule) {
  const int n = static_cast<int>(positions.size());
  RealMatrix d = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d r = positions[i] - positions[j];
      const double dist = r.norm();
      if (dist <= 0.0) {
        throw ValidationError("degenerate geometry: spins " + std::to_string(i) +
                              " and " + std::to_string(j) + " coincide");
      }
      double dij = scale / (dist * dist * dist);
      if (rule == GeometryRule::dipolar_angular) {
        const double cos_theta = r.z() / dist;
        dij *= 1.0 - 3.0 * cos_theta * cos_theta;
      }
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return d;
}

SpinSystem::SpinSystem(int n_spins, RealMatrix couplings, RealVector zeeman_offsets,
                       std::optional<std::vector<Eigen::Vector3d>> positions)
    : n_spins_(n_spins),
      couplings_(std::move(couplings)),
      zeeman_offsets_(std::move(zeeman_offsets)),
      positions_(std::move(positions)) {
  if (n_spins_ < 1) throw ValidationError("spin system needs at least one spin");
  if (n_spins_ > kMaxSpins) {
    throw CapacityError("capacity exceeded: " + std::to_string(n_spins_) +
                        " spins > " + std::to_string(kMaxSpins) +
                        " (dense 2^N matrices)");
  }
  if (couplings_.rows() != n_spins_ || couplings_.cols() != n_spins_) {
    throw ValidationError("coupling matrix must be N x N");
  }
  if (zeeman_offsets_.size() != n_spins_) {
    throw ValidationError("zeeman offsets must have length N");
  }
  const double scale = std::max(couplings_.cwiseAbs().maxCoeff(), 1.0);
  if ((couplings_ - couplings_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("coupling matrix must be symmetric");
  }
  if (couplings_.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw ValidationError("coupling matrix must have zero diagonal");
  }
}

SpinSystem SpinSystem::from_positions(std::vector<Eigen::Vector3d> positions,
                                      double scale, GeometryRule rule) {
  const int n = static_cast<int>(positions.size());
  RealMatrix d = couplings_from_geometry(positions, scale, rule);
  return SpinSystem(n, std::move(d), RealVector::Zero(n), std::move(positions));
}

SpinSystem SpinSystem::pair(double d) {
  RealMatrix c(2, 2);
  c << 0.0, d, d, 0.0;
  return SpinSystem(2, std::move(c), RealVector::Zero(2));
}

SpinSystem SpinSystem::chain(int n, double scale, double spacing, GeometryRule rule) {
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(n);
  for (int i = 0; i < n; ++i) pos.emplace_back(0.0, 0.0, spacing * i);
  return from_positions(std::move(pos), scale, rule);
}

SpinSystem SpinSystem::random_cluster(int n, double scale, std::uint64_t seed,
                                      double side, GeometryRule rule) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, side);
  const double min_dist = 0.4 * side / std::cbrt(static_cast<double>(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Eigen::Vector3d> pos;
    pos.reserve(n);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const Eigen::Vector3d p(uni(rng), uni(rng), uni(rng));
      for (const auto& q : pos) {
        if ((p - q).norm() < min_dist) {
          ok = false;
          break;
        }
      }
      if (ok) pos.push_back(p);
    }
    if (ok) return from_positions(std::move(pos), scale, rule);
  }
  throw ComputeError("random_cluster: could not place spins after 1000 attempts");
}

double SpinSystem::mean_abs_coupling() const {
  if (n_spins_ < 2) return 0.0;
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < n_spins_; ++i) {
    for (int j = i + 1; j < n_spins_; ++j) {
      sum += std::abs(couplings_(i, j));
      ++count;
    }
  }
  return sum / count;
}

SpinSystem SpinSystem::with_zeeman_offsets(RealVector omega) const {
  return SpinSystem(n_spins_, couplings_, std::move(omega), positions_);
}

}  // namespace spinscale
