#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "spinscale/sequence_engine/search.hpp"
#include "spinscale/sequence_engine/sequence.hpp"

namespace spinscale::seq {

// Outcome of the canonical phase synthesis for one direction: the pinned
// pattern plus the size of the ambiguity it was picked from.
struct CanonicalPhases {
  std::vector<int> quarters;
  int candidates_total = 0;     // symbolic matches for the target
  int candidates_closed = 0;    // of those, with a closed toggling frame
  int pick_index = 0;           // lexicographic rank of the pinned pattern
};

// Searches the 8-pulse gap pattern for all phase assignments hitting the
// (+-delta, 0) target with zero Zeeman residual, then pins the first one
// (lexicographic) that also closes the toggling frame and whose pi-shifted
// 16-pulse extension cancels the first-order Magnus term numerically.
// Verified at two probe delta values so the match holds for every delta.
const CanonicalPhases& canonical_phases(Direction dir);

struct RegistryEntry {
  std::string kind;
  std::string direction;
  double delta = 0.0;
  double tau = 0.0;
  std::vector<int> phases;
  std::vector<double> delays;
  double cycle_time = 0.0;
  double h0_residual = 0.0;     // numeric-vs-target residual on the probe system
  int candidates_total = 0;
  int candidates_closed = 0;
  std::uint64_t hash = 0;       // FNV-1a over the canonical entry string
};

std::uint64_t entry_hash(const RegistryEntry& e);

// Versioned append-only record of every concrete sequence handed out.
// Publication is atomic: the file is rewritten to a temp path and renamed.
class SequenceRegistry {
 public:
  SequenceRegistry() = default;
  explicit SequenceRegistry(std::filesystem::path file);

  const RegistryEntry* find(const std::string& kind, const std::string& direction,
                            double delta, double tau) const;

  // Appends (if not already present) and publishes; returns the entry.
  RegistryEntry record(const PulseSequence& sequence);

  const std::vector<RegistryEntry>& entries() const { return entries_; }

  void save() const;

 private:
  void save_locked() const;

  std::optional<std::filesystem::path> file_;
  std::vector<RegistryEntry> entries_;
  mutable std::mutex mutex_;
};

}  // namespace spinscale::seq
