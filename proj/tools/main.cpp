#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinscale/acceptance/acceptance.hpp"
#include "spinscale/parallel.hpp"
#include "spinscale/runner/runner.hpp"
#include "spinscale/sequence_engine/average.hpp"
#include "spinscale/sequence_engine/registry.hpp"
#include "spinscale/version.hpp"

namespace {

using namespace spinscale;

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force,
            int workers, long seed, bool seed_set) {
  if (workers > 0) set_default_workers(workers);
  std::ifstream in(config_path);
  if (!in) throw ValidationError("cannot open config file " + config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (seed_set) j["seed"] = seed;
  const runner::ExperimentConfig cfg = runner::parse_config(j);
  const runner::RunSummary s = runner::run(cfg, out_dir, force);
  std::printf("config %s: %d cells (%d computed, %d cached) in %.2fs -> %s\n",
              runner::hash_hex(s.config_hash).c_str(), s.cells_total, s.cells_computed,
              s.cells_cached, s.wall_seconds, out_dir.c_str());
  return 0;
}

int cmd_analyze(const std::string& results_dir, const std::string& models_arg) {
  const auto models = split_csv_list(models_arg);
  if (models.empty()) throw ValidationError("--models: need at least one model");
  const runner::AnalyzeSummary s = runner::analyze(results_dir, models);
  std::printf("wrote %d fit files under %s\n", s.fits_written, results_dir.c_str());
  return 0;
}

int cmd_plotdata(const std::string& results_dir, const std::string& out_dir, bool svg) {
  const runner::PlotdataSummary s = runner::plotdata(results_dir, out_dir, svg);
  for (const auto& f : s.files) std::printf("  %s\n", f.c_str());
  return 0;
}

int cmd_sequences(const std::string& registry_path, const std::string& kind,
                  const std::string& direction, double delta, double tau_us,
                  bool have_build) {
  if (have_build) {
    seq::SequenceRegistry registry =
        registry_path.empty() ? seq::SequenceRegistry()
                              : seq::SequenceRegistry(registry_path);
    const auto sequence =
        seq::build_sequence(seq::kind_from_name(kind), delta, tau_us * 1e-6,
                            seq::direction_from_name(direction));
    const seq::RegistryEntry e = registry.record(sequence);
    std::printf("%s-%s delta=%g tau=%gus cycle=%gus h0_residual=%.2e hash=%016llx\n",
                e.kind.c_str(), e.direction.c_str(), e.delta, e.tau * 1e6,
                e.cycle_time * 1e6, e.h0_residual,
                static_cast<unsigned long long>(e.hash));
    std::printf("  phases (pi/2 units):");
    for (int p : e.phases) std::printf(" %d", p);
    std::printf("\n  delays (us):");
    for (double d : e.delays) std::printf(" %g", d * 1e6);
    std::printf("\n");
    return 0;
  }
  for (auto dir : {seq::Direction::forward, seq::Direction::backward}) {
    const auto& cp = seq::canonical_phases(dir);
    std::printf("canonical %s phases (pi/2 units):", seq::direction_name(dir).c_str());
    for (int q : cp.quarters) std::printf(" %d", q);
    std::printf("   [%d symbolic matches, %d frame-closed, pinned #%d]\n",
                cp.candidates_total, cp.candidates_closed, cp.pick_index);
  }
  if (!registry_path.empty()) {
    const seq::SequenceRegistry registry{std::filesystem::path(registry_path)};
    std::printf("%-4s %-3s %10s %10s  %s\n", "kind", "dir", "delta", "tau_us", "hash");
    for (const auto& e : registry.entries()) {
      if (!kind.empty() && e.kind != kind) continue;
      if (!direction.empty() && e.direction != direction) continue;
      std::printf("%-4s %-3s %10g %10g  %016llx\n", e.kind.c_str(), e.direction.c_str(),
                  e.delta, e.tau * 1e6, static_cast<unsigned long long>(e.hash));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled dipolar spin dynamics simulator"};
  app.set_version_flag("--version", spinscale::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir = "results", results_dir, models, registry_path;
  std::string kind, direction = "F";
  double delta = 0.0, tau_us = 0.0;
  bool force = false, svg = false;
  int workers = 0;
  long seed = 0;

  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--force", force, "recompute cached cells");
  run->add_option("--workers", workers, "worker threads (default: cores)");
  auto* seed_opt = run->add_option("--seed", seed, "override the master seed");

  auto* analyze = app.add_subcommand("analyze", "fit models to stored curves");
  analyze->add_option("--results", results_dir, "results directory")->required();
  analyze->add_option("--models", models, "comma-separated model list")->required();

  auto* plot = app.add_subcommand("plotdata", "emit figure-ready tables");
  plot->add_option("--results", results_dir, "results directory")->required();
  plot->add_option("--out", out_dir, "output directory");
  plot->add_flag("--svg", svg, "also render static SVG plots");

  auto* sequences = app.add_subcommand("sequences", "list or synthesize pulse sequences");
  sequences->add_option("--registry", registry_path, "registry JSON file");
  auto* kopt = sequences->add_option("--kind", kind, "P8 | P16");
  sequences->add_option("--direction", direction, "F | B");
  auto* dopt = sequences->add_option("--delta", delta, "scaling factor");
  auto* topt = sequences->add_option("--tau-us", tau_us, "base delay in microseconds");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--workers", workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, force, workers, seed, !seed_opt->empty());
    }
    if (analyze->parsed()) return cmd_analyze(results_dir, models);
    if (plot->parsed()) return cmd_plotdata(results_dir, out_dir, svg);
    if (sequences->parsed()) {
      const bool have_build = !kopt->empty() && !dopt->empty() && !topt->empty();
      return cmd_sequences(registry_path, kind, direction, delta, tau_us, have_build);
    }
    if (verify->parsed()) {
      if (workers > 0) spinscale::set_default_workers(workers);
      return spinscale::acceptance::run_all(std::cout) ? 0 : 1;
    }
  } catch (const spinscale::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
