#include "spinscale/runner/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "spinscale/analysis/fits.hpp"
#include "spinscale/parallel.hpp"
#include "spinscale/version.hpp"

namespace spinscale::runner {

namespace {

std::string num_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_base(const ExperimentConfig& cfg, double delta, double tau) {
  std::string kind = cfg.sequence.kind;
  if (kind == "P8" || kind == "P16") kind += cfg.sequence.direction;
  return cfg.protocol.type + "_" + kind + "_d" + num_tag(delta) + "_t" +
         num_tag(tau * 1e6) + "us";
}

nlohmann::json cell_params(const ExperimentConfig& cfg, double delta, double tau) {
  return nlohmann::json{{"config", cfg.canonical},
                        {"delta", delta},
                        {"tau", tau},
                        {"protocol", cfg.protocol.type}};
}

nlohmann::json curve_meta_json(const proto::CurveMetadata& m) {
  return nlohmann::json{{"kind", m.kind},         {"direction", m.direction},
                        {"delta", m.delta},       {"tau_s", m.tau},
                        {"n_spins", m.n_spins},   {"protocol", m.protocol}};
}

CsvTable curve_table(const proto::SignalCurve& c) {
  CsvTable t;
  t.header = {"time_s", "self_time_s", "value"};
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    t.rows.push_back({c.times[i], c.self_times[i], c.values[i]});
  }
  return t;
}

std::vector<int> mqc_cycle_list(const ProtocolSpec& p) {
  if (!p.mqc_cycles.empty()) return p.mqc_cycles;
  std::vector<int> ks;
  const int n_points = std::min(8, p.cycles);
  for (int i = 1; i <= n_points; ++i) {
    const int k = static_cast<int>(std::round(static_cast<double>(i) * p.cycles / n_points));
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  return ks;
}

struct CellOutput {
  std::vector<std::pair<std::string, CsvTable>> tables;  // filename -> data
  nlohmann::json meta;
};

CellOutput compute_cell(const ExperimentConfig& cfg, const SpinSystem& system,
                        double delta, double tau) {
  CellOutput out;
  const std::string base = cell_base(cfg, delta, tau);
  const proto::SequenceConfig sc = cfg.sequence.cell_config(delta, tau);
  const std::vector<double> times = proto::stroboscopic_times(sc, cfg.protocol.cycles);

  if (cfg.protocol.type == "decay") {
    const proto::SignalCurve curve = proto::magnetization_decay(system, sc, times);
    out.meta["curve"] = curve_meta_json(curve.meta);
    out.tables.emplace_back(base + ".csv", curve_table(curve));
  } else if (cfg.protocol.type == "echo") {
    const proto::SignalCurve curve = proto::loschmidt_echo(system, sc, times);
    out.meta["curve"] = curve_meta_json(curve.meta);
    out.tables.emplace_back(base + ".csv", curve_table(curve));
    if (cfg.protocol.normalize_by_delta0 && delta != 0.0) {
      proto::SequenceConfig ref = sc;
      ref.delta = 0.0;
      const proto::SignalCurve reference = proto::loschmidt_echo(system, ref, times);
      const proto::SignalCurve norm = proto::normalized_by_reference(curve, reference);
      out.tables.emplace_back(base + "_norm.csv", curve_table(norm));
    }
  } else {  // mqc
    const std::vector<int> ks = mqc_cycle_list(cfg.protocol);
    proto::SignalCurve counts;
    counts.meta = proto::CurveMetadata{};
    CsvTable count_table;
    count_table.header = {"time_s", "self_time_s", "n_corr", "second_moment"};
    for (int k : ks) {
      const std::vector<double> grid = proto::stroboscopic_times(sc, k);
      const double t = grid.back();
      const proto::MQCSpectrum spec = proto::mqc_spectrum(system, sc, t, cfg.protocol.q_steps);
      CsvTable st;
      st.header = {"q", "s_q"};
      for (std::size_t i = 0; i < spec.s_q.size(); ++i) {
        st.rows.push_back({static_cast<double>(spec.order_of(i)), spec.s_q[i]});
      }
      out.tables.emplace_back(base + "_k" + std::to_string(k) + ".csv", st);
      const fit::FitResult gf = fit::fit_gaussian_mqc(spec);
      count_table.rows.push_back({t, std::abs(delta) * t, gf.derived.at("n_corr"),
                                  spec.second_moment});
    }
    out.tables.emplace_back(base + "_spincount.csv", count_table);
    nlohmann::json m;
    m["kind"] = cfg.sequence.kind;
    m["direction"] = cfg.sequence.direction;
    m["delta"] = delta;
    m["tau_s"] = tau;
    m["n_spins"] = system.n_spins();
    m["protocol"] = "mqc";
    m["q_steps"] = cfg.protocol.q_steps;
    out.meta["curve"] = m;
  }
  return out;
}

}  // namespace

RunSummary run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
               bool force) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  const SpinSystem system = cfg.system.build();

  struct Cell {
    double delta, tau;
    std::string base;
    std::uint64_t hash;
    bool cached = false;
  };
  std::vector<Cell> cells;
  for (double delta : cfg.sequence.deltas) {
    for (double tau : cfg.sequence.taus) {
      Cell c;
      c.delta = delta;
      c.tau = tau;
      c.base = cell_base(cfg, delta, tau);
      c.hash = json_hash(cell_params(cfg, delta, tau));
      cells.push_back(c);
    }
  }

  RunSummary summary;
  summary.config_hash = cfg.hash();
  summary.cells_total = static_cast<int>(cells.size());

  // cache pass (serial): identical hash means identical parameters; an equal
  // hash with different stored parameters is a collision and always an error
  for (Cell& c : cells) {
    const auto meta_path = out_dir / (c.base + ".meta.json");
    if (!std::filesystem::exists(meta_path)) continue;
    std::ifstream in(meta_path);
    nlohmann::json meta;
    in >> meta;
    if (meta.value("cell_hash", std::string()) == hash_hex(c.hash)) {
      if (meta.at("cell_params") != cell_params(cfg, c.delta, c.tau)) {
        throw Error("cell hash collision on " + c.base);
      }
      bool all_files = true;
      for (const auto& f : meta.at("files")) {
        all_files &= std::filesystem::exists(out_dir / f.get<std::string>());
      }
      if (all_files && !force) c.cached = true;
    }
  }

  std::vector<CellOutput> outputs(cells.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].cached) todo.push_back(i);
  }
  parallel_for(todo.size(), [&](std::size_t w) {
    const Cell& c = cells[todo[w]];
    outputs[todo[w]] = compute_cell(cfg, system, c.delta, c.tau);
  });

  // ordered write
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.cached) {
      ++summary.cells_cached;
      continue;
    }
    CellOutput& out = outputs[i];
    nlohmann::json meta;
    meta["cell_hash"] = hash_hex(c.hash);
    meta["config_hash"] = hash_hex(summary.config_hash);
    meta["cell_params"] = cell_params(cfg, c.delta, c.tau);
    meta["tool_version"] = kVersion;
    meta["curve"] = out.meta.value("curve", nlohmann::json::object());
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, table] : out.tables) files.push_back(name);
    meta["files"] = files;
    for (const auto& [name, table] : out.tables) {
      write_csv((out_dir / name).string(), table);
      summary.files.push_back(name);
    }
    std::ofstream mf(out_dir / (c.base + ".meta.json"));
    mf << meta.dump(2) << "\n";
    summary.files.push_back(c.base + ".meta.json");
    ++summary.cells_computed;
  }

  // self-time collapse report for multi-delta decay sweeps, one per tau
  if (cfg.protocol.type == "decay" && cfg.sequence.deltas.size() >= 2) {
    for (double tau : cfg.sequence.taus) {
      std::vector<proto::SignalCurve> curves;
      for (const Cell& c : cells) {
        if (c.tau != tau) continue;
        const CsvTable t = read_csv((out_dir / (c.base + ".csv")).string());
        proto::SignalCurve curve;
        for (const auto& row : t.rows) {
          curve.times.push_back(row[0]);
          curve.self_times.push_back(std::abs(row[1]));
          curve.values.push_back(row[2]);
        }
        curves.push_back(std::move(curve));
      }
      const proto::CollapseReport rep = proto::self_time_collapse(curves);
      nlohmann::json j{{"max_spread", rep.max_spread},
                       {"mean_spread", rep.mean_spread},
                       {"self_time_min", rep.self_time_min},
                       {"self_time_max", rep.self_time_max},
                       {"grid_points", rep.grid_points},
                       {"tau_s", tau}};
      const std::string name = "collapse_t" + num_tag(tau * 1e6) + "us.json";
      std::ofstream cf(out_dir / name);
      cf << j.dump(2) << "\n";
      summary.files.push_back(name);
    }
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  nlohmann::json record{{"config_hash", hash_hex(summary.config_hash)},
                        {"tool_version", kVersion},
                        {"wall_seconds", summary.wall_seconds},
                        {"cells_total", summary.cells_total},
                        {"cells_computed", summary.cells_computed},
                        {"cells_cached", summary.cells_cached}};
  std::ofstream rf(out_dir / "record.json");
  rf << record.dump(2) << "\n";
  return summary;
}

std::vector<StoredCurve> load_curves(const std::filesystem::path& results_dir,
                                     const std::string& protocol_filter) {
  std::vector<std::filesystem::path> metas;
  if (std::filesystem::exists(results_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 10 && name.substr(name.size() - 10) == ".meta.json") {
        metas.push_back(entry.path());
      }
    }
  }
  std::sort(metas.begin(), metas.end());
  std::vector<StoredCurve> out;
  for (const auto& mp : metas) {
    std::ifstream in(mp);
    nlohmann::json meta;
    in >> meta;
    const nlohmann::json cm = meta.value("curve", nlohmann::json::object());
    const std::string protocol = cm.value("protocol", "");
    if (protocol != "decay" && protocol != "echo") continue;
    if (!protocol_filter.empty() && protocol != protocol_filter) continue;
    for (const auto& jf : meta.at("files")) {
      const std::string fname = jf.get<std::string>();
      if (fname.size() < 4 || fname.substr(fname.size() - 4) != ".csv") continue;
      StoredCurve sc;
      sc.base = fname.substr(0, fname.size() - 4);
      sc.meta = meta;
      const CsvTable t = read_csv((results_dir / fname).string());
      for (const auto& row : t.rows) {
        sc.curve.times.push_back(row[0]);
        sc.curve.self_times.push_back(row[1]);
        sc.curve.values.push_back(row[2]);
      }
      sc.curve.meta.kind = cm.value("kind", "");
      sc.curve.meta.direction = cm.value("direction", "");
      sc.curve.meta.delta = cm.value("delta", 0.0);
      sc.curve.meta.tau = cm.value("tau_s", 0.0);
      sc.curve.meta.n_spins = cm.value("n_spins", 0);
      sc.curve.meta.protocol = protocol;
      if (sc.base.size() > 5 && sc.base.substr(sc.base.size() - 5) == "_norm") {
        sc.curve.meta.protocol += "_normalized";
      }
      out.push_back(std::move(sc));
    }
  }
  return out;
}

std::vector<StoredSpectrum> load_spectra(const std::filesystem::path& results_dir) {
  std::vector<std::filesystem::path> metas;
  if (std::filesystem::exists(results_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 10 && name.substr(name.size() - 10) == ".meta.json") {
        metas.push_back(entry.path());
      }
    }
  }
  std::sort(metas.begin(), metas.end());
  std::vector<StoredSpectrum> out;
  for (const auto& mp : metas) {
    std::ifstream in(mp);
    nlohmann::json meta;
    in >> meta;
    const nlohmann::json cm = meta.value("curve", nlohmann::json::object());
    if (cm.value("protocol", "") != "mqc") continue;
    // reconstruct times from the spincount table
    std::map<int, std::pair<double, double>> k_to_times;
    for (const auto& jf : meta.at("files")) {
      const std::string fname = jf.get<std::string>();
      if (fname.find("_spincount.csv") == std::string::npos) continue;
      const CsvTable t = read_csv((results_dir / fname).string());
      int idx = 0;
      for (const auto& row : t.rows) {
        k_to_times[idx++] = {row[0], row[1]};
      }
    }
    int idx = 0;
    for (const auto& jf : meta.at("files")) {
      const std::string fname = jf.get<std::string>();
      if (fname.find("_k") == std::string::npos ||
          fname.find("_spincount") != std::string::npos) {
        continue;
      }
      StoredSpectrum sp;
      sp.base = fname.substr(0, fname.size() - 4);
      sp.meta = meta;
      const CsvTable t = read_csv((results_dir / fname).string());
      for (const auto& row : t.rows) {
        sp.orders.push_back(static_cast<int>(row[0]));
        sp.s_q.push_back(row[1]);
      }
      if (k_to_times.count(idx)) {
        sp.time = k_to_times[idx].first;
        sp.self_time = k_to_times[idx].second;
      }
      ++idx;
      out.push_back(std::move(sp));
    }
  }
  return out;
}

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j,
                AnalyzeSummary& summary) {
  std::ofstream f(path);
  f << j.dump(2) << "\n";
  summary.files.push_back(path.filename().string());
  ++summary.fits_written;
}

// One failed curve should not sink a whole sweep: record the diagnostic in
// place of the fit and keep going.
void write_fit(const std::filesystem::path& path,
               const std::function<nlohmann::json()>& make,
               AnalyzeSummary& summary) {
  nlohmann::json j;
  try {
    j = make();
  } catch (const Error& e) {
    j = nlohmann::json{{"error", e.what()}};
    std::fprintf(stderr, "warning: %s: %s\n", path.filename().string().c_str(),
                 e.what());
  }
  write_json(path, j, summary);
}

// T2 per delta from decay fits, T3 / TSigma from echo half-max times.
struct RateTable {
  std::map<double, double> t2;       // delta -> T2
  std::map<double, double> t3;       // delta -> T3 (delta > 0)
  double t_sigma = 0.0;              // from the delta = 0 echo
  bool has_t_sigma = false;
};

RateTable build_rate_table(const std::filesystem::path& results_dir) {
  RateTable table;
  for (const auto& sc : load_curves(results_dir, "decay")) {
    if (sc.curve.meta.protocol != "decay") continue;
    const fit::FitResult fr = fit::fit_abragam(sc.curve);
    table.t2[std::abs(sc.curve.meta.delta)] = fr.derived.at("T2");
  }
  for (const auto& sc : load_curves(results_dir, "echo")) {
    if (sc.curve.meta.protocol != "echo") continue;  // raw, not normalized
    const fit::HalfMaxResult hm = fit::half_max_time(sc.curve);
    if (hm.censored) continue;
    if (sc.curve.meta.delta == 0.0) {
      table.t_sigma = hm.time;
      table.has_t_sigma = true;
    } else {
      table.t3[std::abs(sc.curve.meta.delta)] = hm.time;
    }
  }
  return table;
}

std::vector<std::pair<double, double>> saturation_points(const RateTable& table) {
  std::vector<std::pair<double, double>> pts;
  if (!table.has_t_sigma) return pts;
  for (const auto& [delta, t3] : table.t3) {
    const auto it = table.t2.find(delta);
    if (it == table.t2.end()) continue;
    pts.emplace_back(it->second / table.t_sigma, it->second / t3);
  }
  return pts;
}

}  // namespace

AnalyzeSummary analyze(const std::filesystem::path& results_dir,
                       const std::vector<std::string>& models) {
  AnalyzeSummary summary;
  const std::set<std::string> known = {"abragam",      "flambaum_izrailev", "boltzmann",
                                       "gaussian_mqc", "power_law",         "saturation",
                                       "linear"};
  for (const auto& m : models) {
    if (!known.count(m)) throw ValidationError("unknown analysis model '" + m + "'");
  }
  for (const auto& model : models) {
    int matched = 0;
    if (model == "abragam") {
      for (const auto& sc : load_curves(results_dir, "decay")) {
        write_fit(results_dir / (sc.base + ".fit_abragam.json"),
                  [&] { return fit::fit_abragam(sc.curve).to_json(); }, summary);
        ++matched;
      }
    } else if (model == "flambaum_izrailev") {
      for (const auto& sc : load_curves(results_dir, "echo")) {
        if (sc.curve.meta.delta != 0.0 || sc.curve.meta.protocol != "echo") continue;
        write_fit(results_dir / (sc.base + ".fit_flambaum_izrailev.json"),
                  [&] {
                    const fit::FitResult fr = fit::fit_flambaum_izrailev(sc.curve);
                    nlohmann::json j = fr.to_json();
                    // the model is even in both parameters: magnitudes only
                    const fit::FgrResult fgr = fit::fgr_rate(
                        std::abs(fr.param("gamma")), std::abs(fr.param("sigma")));
                    j["derived"]["sigma_1R"] = fgr.sigma_1r;
                    j["derived"]["N1"] = fgr.n1;
                    return j;
                  },
                  summary);
        ++matched;
      }
    } else if (model == "boltzmann") {
      for (const auto& sc : load_curves(results_dir, "echo")) {
        write_fit(results_dir / (sc.base + ".fit_boltzmann.json"),
                  [&] { return fit::fit_boltzmann(sc.curve).to_json(); }, summary);
        ++matched;
      }
    } else if (model == "gaussian_mqc") {
      for (const auto& sp : load_spectra(results_dir)) {
        proto::MQCSpectrum spec;
        spec.q_steps = static_cast<int>(sp.s_q.size());
        spec.s_q = sp.s_q;
        spec.time = sp.time;
        spec.second_moment = proto::otoc_second_moment(spec);
        const fit::FitResult fr = fit::fit_gaussian_mqc(spec);
        write_json(results_dir / (sp.base + ".fit_gaussian_mqc.json"), fr.to_json(),
                   summary);
        ++matched;
      }
    } else if (model == "power_law") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.find("_spincount.csv") == std::string::npos) continue;
        const CsvTable t = read_csv(entry.path().string());
        for (const auto& row : t.rows) {
          if (row[1] > 0.0) pts.emplace_back(row[1], row[2]);
        }
      }
      if (!pts.empty()) {
        std::sort(pts.begin(), pts.end());
        const fit::FitResult fr = fit::fit_power_law(pts);
        write_json(results_dir / "fit_power_law.json", fr.to_json(), summary);
        ++matched;
      }
    } else if (model == "saturation") {
      const RateTable table = build_rate_table(results_dir);
      const auto pts = saturation_points(table);
      if (!pts.empty()) {
        const fit::FitResult fr = fit::fit_saturation(pts);
        nlohmann::json j = fr.to_json();
        nlohmann::json jp = nlohmann::json::array();
        for (const auto& [x, y] : pts) jp.push_back({{"t2_over_tsigma", x}, {"t2_over_t3", y}});
        j["points"] = jp;
        write_json(results_dir / "fit_saturation.json", j, summary);
        ++matched;
      }
    } else if (model == "linear") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& sc : load_curves(results_dir, "decay")) {
        if (sc.curve.meta.delta == 0.0) continue;
        const fit::FitResult fr = fit::fit_abragam(sc.curve);
        pts.emplace_back(std::abs(sc.curve.meta.delta), 1.0 / fr.derived.at("T2"));
      }
      if (pts.size() >= 2) {
        std::sort(pts.begin(), pts.end());
        const fit::FitResult fr = fit::linear_fit(pts);
        write_json(results_dir / "fit_linear.json", fr.to_json(), summary);
        ++matched;
      }
    }
    if (matched == 0) {
      throw ComputeError("no curves matched model '" + model + "'");
    }
  }
  return summary;
}

}  // namespace spinscale::runner
