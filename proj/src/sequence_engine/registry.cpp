#include "spinscale/sequence_engine/registry.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "spinscale/hamiltonians/hamiltonians.hpp"
#include "spinscale/sequence_engine/average.hpp"
#include "spinscale/version.hpp"

namespace spinscale::seq {

namespace {

// Candidate filter: the pi-shifted 16-pulse extension must cancel the
// first-order Magnus term, as the symmetrized sequence is meant to.
bool cancels_16p_first_order(const std::vector<double>& gaps,
                             const std::vector<int>& quarters) {
  std::vector<Element> cycle = assemble_pulse_train(gaps, quarters);
  std::vector<Element> shifted = cycle;
  for (Element& e : shifted) {
    if (e.type == Element::Type::pulse) e.pulse.phase += kPi;
  }
  cycle.insert(cycle.end(), shifted.begin(), shifted.end());
  const SpinSystem& probe = probe_system();
  const Matrix h1 = numeric_average_hamiltonian(cycle, probe, ErrorModel{}, 1);
  const double scale = ham::dipolar_secular(probe, Axis::y).norm();
  return h1.norm() / scale < 1e-10;
}

CanonicalPhases synthesize(Direction dir) {
  const double sign = dir == Direction::backward ? -1.0 : 1.0;
  // Weights are affine in delta, so a pattern matching the target at two
  // distinct probe deltas matches at every delta.
  const double probe_a = 0.3, probe_b = 0.17, tau = 1.0;
  const auto hits_a =
      search_phase_patterns(p8_gap_pattern(probe_a, tau, dir), {sign * probe_a, 0.0});
  const auto hits_b =
      search_phase_patterns(p8_gap_pattern(probe_b, tau, dir), {sign * probe_b, 0.0});
  std::set<std::vector<int>> second;
  for (const auto& h : hits_b) second.insert(h.quarters);

  CanonicalPhases out;
  int rank = -1;
  for (const auto& h : hits_a) {
    if (!second.count(h.quarters)) continue;
    ++rank;
    ++out.candidates_total;
    if (!h.average.frame_closed) continue;
    ++out.candidates_closed;
    if (!out.quarters.empty()) continue;  // already pinned; keep counting
    if (cancels_16p_first_order(p8_gap_pattern(probe_a, tau, dir), h.quarters)) {
      out.quarters = h.quarters;
      out.pick_index = rank;
    }
  }
  if (out.quarters.empty()) {
    throw ComputeError("canonical phase synthesis found no pattern that closes "
                       "the frame and cancels the 16-pulse first order");
  }
  return out;
}

}  // namespace

const CanonicalPhases& canonical_phases(Direction dir) {
  static const CanonicalPhases forward = synthesize(Direction::forward);
  static const CanonicalPhases backward = synthesize(Direction::backward);
  if (dir == Direction::none) {
    throw ValidationError("canonical_phases: direction required");
  }
  return dir == Direction::forward ? forward : backward;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string canonical_string(const RegistryEntry& e) {
  char buf[64];
  std::string s = e.kind + "|" + e.direction + "|";
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g,", v);
    s += buf;
  };
  put(e.delta);
  put(e.tau);
  s += "|";
  for (int p : e.phases) s += std::to_string(p) + ",";
  s += "|";
  for (double d : e.delays) put(d);
  return s;
}

}  // namespace

std::uint64_t entry_hash(const RegistryEntry& e) { return fnv1a(canonical_string(e)); }

SequenceRegistry::SequenceRegistry(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(*file_)) return;
  std::ifstream in(*file_);
  if (!in) throw Error("cannot read sequence registry " + file_->string());
  nlohmann::json j;
  in >> j;
  for (const auto& je : j.at("entries")) {
    RegistryEntry e;
    e.kind = je.at("kind").get<std::string>();
    e.direction = je.at("direction").get<std::string>();
    e.delta = je.at("delta").get<double>();
    e.tau = je.at("tau").get<double>();
    e.phases = je.at("phases").get<std::vector<int>>();
    e.delays = je.at("delays").get<std::vector<double>>();
    e.cycle_time = je.at("cycle_time").get<double>();
    e.h0_residual = je.value("h0_residual", 0.0);
    e.candidates_total = je.value("candidates_total", 0);
    e.candidates_closed = je.value("candidates_closed", 0);
    e.hash = std::stoull(je.at("hash").get<std::string>(), nullptr, 16);
    if (e.hash != entry_hash(e)) {
      throw Error("sequence registry entry hash mismatch (corrupted file?)");
    }
    entries_.push_back(std::move(e));
  }
}

const RegistryEntry* SequenceRegistry::find(const std::string& kind,
                                            const std::string& direction, double delta,
                                            double tau) const {
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& e : entries_) {
    if (e.kind == kind && e.direction == direction && e.delta == delta && e.tau == tau) {
      return &e;
    }
  }
  return nullptr;
}

RegistryEntry SequenceRegistry::record(const PulseSequence& sequence) {
  RegistryEntry e;
  e.kind = kind_name(sequence.kind);
  e.direction = direction_name(sequence.direction);
  e.delta = sequence.delta;
  e.tau = sequence.tau;
  e.phases = sequence.phase_quarters;
  for (const Element& el : sequence.elements) {
    if (el.type == Element::Type::delay) e.delays.push_back(el.delay);
  }
  e.cycle_time = sequence.cycle_time;
  if (!sequence.parametric()) {
    e.h0_residual = sequence_h0_residual(sequence);
    const CanonicalPhases& cp = canonical_phases(sequence.direction);
    e.candidates_total = cp.candidates_total;
    e.candidates_closed = cp.candidates_closed;
  }
  e.hash = entry_hash(e);

  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& existing : entries_) {
    if (existing.hash == e.hash) return existing;
  }
  entries_.push_back(e);
  if (file_) save_locked();
  return e;
}

void SequenceRegistry::save() const {
  std::lock_guard<std::mutex> lock(mutex_);
  save_locked();
}

void SequenceRegistry::save_locked() const {
  if (!file_) return;
  nlohmann::json j;
  j["version"] = 1;
  j["tool_version"] = kVersion;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries_) {
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(e.hash));
    j["entries"].push_back({{"kind", e.kind},
                            {"direction", e.direction},
                            {"delta", e.delta},
                            {"tau", e.tau},
                            {"phases", e.phases},
                            {"delays", e.delays},
                            {"cycle_time", e.cycle_time},
                            {"h0_residual", e.h0_residual},
                            {"candidates_total", e.candidates_total},
                            {"candidates_closed", e.candidates_closed},
                            {"hash", std::string(hash_hex)}});
  }
  const std::filesystem::path tmp = *file_;
  const std::filesystem::path tmp_path = tmp.string() + ".tmp";
  {
    std::ofstream out(tmp_path);
    if (!out) throw Error("cannot write sequence registry " + tmp_path.string());
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp_path, *file_);
}

}  // namespace spinscale::seq
