#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinscale/runner/config.hpp"
#include "spinscale/runner/csv.hpp"

namespace spinscale::runner {

struct RunSummary {
  std::uint64_t config_hash = 0;
  int cells_total = 0;
  int cells_computed = 0;
  int cells_cached = 0;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

// Executes the sweep (one cell per delta x tau), writes CSV curves and JSON
// sidecars into out_dir, and skips cells whose sidecar already carries the
// same cell hash unless force is set. Output bytes are independent of the
// worker count: cells are computed in parallel but written in cell order.
RunSummary run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               bool force = false);

struct StoredCurve {
  proto::SignalCurve curve;
  std::string base;           // file stem inside the results directory
  nlohmann::json meta;
};

struct StoredSpectrum {
  std::vector<int> orders;
  std::vector<double> s_q;
  double time = 0.0;
  double self_time = 0.0;
  std::string base;
  nlohmann::json meta;
};

std::vector<StoredCurve> load_curves(const std::filesystem::path& results_dir,
                                     const std::string& protocol_filter = "");
std::vector<StoredSpectrum> load_spectra(const std::filesystem::path& results_dir);

struct AnalyzeSummary {
  int fits_written = 0;
  std::vector<std::string> files;
};

// Applies the requested models to every curve/spectrum they fit and writes
// one JSON per fit next to its source; aggregate models (power_law,
// saturation, linear) write a single file each.
AnalyzeSummary analyze(const std::filesystem::path& results_dir,
                       const std::vector<std::string>& models);

struct PlotdataSummary {
  std::vector<std::string> files;
};

// Emits the figure-ready tables (and optional SVG renderings) for whatever
// curves are present: magnetization vs self-time, spin counting vs self-time,
// echo-rate saturation, and the delta = 0 echo with its long/short-time fit.
PlotdataSummary plotdata(const std::filesystem::path& results_dir,
                         const std::filesystem::path& out_dir, bool svg = false);

}  // namespace spinscale::runner
