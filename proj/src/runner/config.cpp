#include "spinscale/runner/config.hpp"

#include <cstdio>
#include <fstream>

namespace spinscale::runner {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw ValidationError("config: " + path + ": " + why);
}

const nlohmann::json& need(const nlohmann::json& j, const char* key,
                           const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

double need_number(const nlohmann::json& j, const char* key, const std::string& path) {
  const auto& v = need(j, key, path);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

double opt_number(const nlohmann::json& j, const char* key, double fallback,
                  const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

std::string opt_string(const nlohmann::json& j, const char* key,
                       const std::string& fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_string()) bad(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

std::vector<double> number_list(const nlohmann::json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array() || v.empty()) bad(path, "expected a number or non-empty array");
  for (const auto& e : v) {
    if (!e.is_number()) bad(path, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

SpinSystem SystemSpec::build() const {
  SpinSystem system = [&] {
    if (geometry == "pair") {
      if (n_spins != 2) throw ValidationError("config: system.geometry: pair needs n_spins = 2");
      return SpinSystem::pair(scale);
    }
    if (geometry == "chain") return SpinSystem::chain(n_spins, scale, spacing);
    if (geometry == "cubic_cluster") {
      if (n_spins > 8) {
        throw ValidationError("config: system.geometry: cubic_cluster holds at most 8 spins");
      }
      std::vector<Eigen::Vector3d> pos;
      for (int i = 0; i < n_spins; ++i) {
        pos.emplace_back(spacing * (i & 1), spacing * ((i >> 1) & 1),
                         spacing * ((i >> 2) & 1));
      }
      return SpinSystem::from_positions(std::move(pos), scale,
                                        GeometryRule::dipolar_angular);
    }
    if (geometry == "random_cluster") {
      return SpinSystem::random_cluster(n_spins, scale, seed, side);
    }
    throw ValidationError("config: system.geometry: unknown geometry '" + geometry + "'");
  }();
  if (!zeeman_offsets.empty()) {
    if (static_cast<int>(zeeman_offsets.size()) != n_spins) {
      throw ValidationError("config: system.zeeman_offsets: needs n_spins entries");
    }
    RealVector omega(n_spins);
    for (int i = 0; i < n_spins; ++i) omega(i) = zeeman_offsets[i];
    system = system.with_zeeman_offsets(omega);
  }
  return system;
}

proto::SequenceConfig SequenceSpec::cell_config(double delta, double tau) const {
  proto::SequenceConfig c;
  c.kind = proto::evolution_kind_from_name(kind);
  c.delta = delta;
  c.tau = tau;
  c.direction = seq::direction_from_name(direction);
  c.error = error;
  c.min_separation = min_separation;
  c.drive_amplitude = drive_amplitude;
  c.generator = generator;
  return c;
}

std::uint64_t json_hash(const nlohmann::json& j) {
  // nlohmann::json objects are key-sorted, so dump() is already canonical
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t ExperimentConfig::hash() const { return json_hash(canonical); }

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "system" && key != "sequence" && key != "protocol" && key != "seed") {
      bad(key, "unknown key");
    }
  }
  ExperimentConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(opt_number(j, "seed", 1.0, ""));

  const auto& js = need(j, "system", "");
  cfg.system.n_spins = static_cast<int>(need_number(js, "n_spins", "system"));
  if (cfg.system.n_spins < 1 || cfg.system.n_spins > kMaxSpins) {
    bad("system.n_spins", "must be in [1, " + std::to_string(kMaxSpins) + "]");
  }
  cfg.system.geometry = opt_string(js, "geometry", "random_cluster", "system");
  cfg.system.scale = opt_number(js, "scale_rad_s", cfg.system.scale, "system");
  cfg.system.spacing = opt_number(js, "spacing", 1.0, "system");
  cfg.system.side = opt_number(js, "side", 2.0, "system");
  cfg.system.seed = static_cast<std::uint64_t>(opt_number(js, "seed",
                                                          static_cast<double>(cfg.seed),
                                                          "system"));
  if (js.contains("zeeman_offsets")) {
    cfg.system.zeeman_offsets = number_list(js.at("zeeman_offsets"), "system.zeeman_offsets");
  }

  const auto& jq = need(j, "sequence", "");
  cfg.sequence.kind = opt_string(jq, "kind", "ideal", "sequence");
  proto::evolution_kind_from_name(cfg.sequence.kind);  // validates
  cfg.sequence.deltas = number_list(need(jq, "delta", "sequence"), "sequence.delta");
  if (jq.contains("tau_us")) {
    cfg.sequence.taus = number_list(jq.at("tau_us"), "sequence.tau_us");
    for (double& t : cfg.sequence.taus) t *= 1e-6;
  }
  cfg.sequence.direction = opt_string(jq, "direction", "F", "sequence");
  seq::direction_from_name(cfg.sequence.direction);  // validates
  if (jq.contains("error_model")) {
    const auto& je = jq.at("error_model");
    cfg.sequence.error.flip_angle_error =
        opt_number(je, "flip_angle_error", 0.0, "sequence.error_model");
    cfg.sequence.error.phase_offset =
        opt_number(je, "phase_offset_rad", 0.0, "sequence.error_model");
    cfg.sequence.error.pulse_width =
        opt_number(je, "pulse_width_us", 0.0, "sequence.error_model") * 1e-6;
    cfg.sequence.error.zeeman_offset =
        opt_number(je, "zeeman_offset_rad_s", 0.0, "sequence.error_model");
  }
  cfg.sequence.min_separation =
      opt_number(jq, "min_separation_us", 1.0, "sequence") * 1e-6;
  cfg.sequence.drive_amplitude = opt_number(jq, "drive_amplitude_rad_s", 0.0, "sequence");
  if (jq.contains("generator")) {
    try {
      cfg.sequence.generator = jq.at("generator").get<ham::HamiltonianSpec>();
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      bad("sequence.generator", e.what());
    }
  }

  const auto& jp = need(j, "protocol", "");
  cfg.protocol.type = opt_string(jp, "type", "decay", "protocol");
  if (cfg.protocol.type != "decay" && cfg.protocol.type != "echo" &&
      cfg.protocol.type != "mqc") {
    bad("protocol.type", "must be decay, echo or mqc");
  }
  cfg.protocol.cycles = static_cast<int>(opt_number(jp, "cycles", 32.0, "protocol"));
  if (cfg.protocol.cycles < 1) bad("protocol.cycles", "must be positive");
  cfg.protocol.q_steps = static_cast<int>(opt_number(jp, "q_steps", 64.0, "protocol"));
  if (jp.contains("mqc_cycles")) {
    for (double v : number_list(jp.at("mqc_cycles"), "protocol.mqc_cycles")) {
      cfg.protocol.mqc_cycles.push_back(static_cast<int>(v));
    }
  }
  if (jp.contains("normalize_by_delta0")) {
    if (!jp.at("normalize_by_delta0").is_boolean()) {
      bad("protocol.normalize_by_delta0", "expected a boolean");
    }
    cfg.protocol.normalize_by_delta0 = jp.at("normalize_by_delta0").get<bool>();
  }

  // bounds that the sequence engine would only hit later, checked up front
  for (double d : cfg.sequence.deltas) {
    if (cfg.sequence.kind == "P8" || cfg.sequence.kind == "P16") {
      const auto dir = seq::direction_from_name(cfg.sequence.direction);
      if (dir == seq::Direction::backward && d > 0.5) {
        bad("sequence.delta", "backward scaling exceeds 1/2");
      }
      if (dir == seq::Direction::forward && (d < 0.0 || d >= 1.0)) {
        bad("sequence.delta", "forward scaling must lie in [0, 1)");
      }
    }
  }
  if (cfg.protocol.type == "echo" &&
      (cfg.sequence.kind == "P8" || cfg.sequence.kind == "P16")) {
    for (double d : cfg.sequence.deltas) {
      if (d > 0.5) bad("sequence.delta", "backward scaling exceeds 1/2");
    }
  }

  cfg.canonical = j;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace spinscale::runner
