#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinscale/protocols/protocols.hpp"
#include "spinscale/spin_core/spin_system.hpp"

namespace spinscale::runner {

struct SystemSpec {
  int n_spins = 4;
  std::string geometry = "random_cluster";  // pair | chain | cubic_cluster | random_cluster
  double scale = 2.0 * kPi * 1000.0;        // rad/s
  double spacing = 1.0;
  double side = 2.0;
  std::uint64_t seed = 1;
  std::vector<double> zeeman_offsets;       // optional, rad/s

  SpinSystem build() const;
};

struct SequenceSpec {
  std::string kind = "ideal";  // ideal | P8 | P16 | free | magic_echo
  std::vector<double> deltas = {0.3};
  std::vector<double> taus = {2e-6};  // s
  std::string direction = "F";
  seq::ErrorModel error;
  double min_separation = 1e-6;
  double drive_amplitude = 0.0;
  std::optional<ham::HamiltonianSpec> generator;

  proto::SequenceConfig cell_config(double delta, double tau) const;
};

struct ProtocolSpec {
  std::string type = "decay";  // decay | echo | mqc
  int cycles = 32;
  std::vector<int> sample_cycles;  // optional subset; default 0..cycles
  int q_steps = 64;
  std::vector<int> mqc_cycles;     // times (in cycles) at which spectra are taken
  bool normalize_by_delta0 = false;
};

struct ExperimentConfig {
  SystemSpec system;
  SequenceSpec sequence;
  ProtocolSpec protocol;
  std::uint64_t seed = 1;       // master seed; feeds the system geometry
  nlohmann::json canonical;     // normalized JSON the hash is computed over

  std::uint64_t hash() const;
};

// Parses and validates; error messages name the offending key path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

std::uint64_t json_hash(const nlohmann::json& j);
std::string hash_hex(std::uint64_t h);

}  // namespace spinscale::runner
