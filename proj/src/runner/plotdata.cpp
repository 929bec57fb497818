#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "spinscale/analysis/fits.hpp"
#include "spinscale/analysis/models.hpp"
#include "spinscale/runner/runner.hpp"

namespace spinscale::runner {

namespace {

// Minimal static SVG: one polyline per series over auto-scaled axes.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::vector<SvgSeries>& series) {
  const int width = 640, height = 440, margin = 50;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const auto px = [&](double x) {
    return margin + (x - x0) / (x1 - x0) * (width - 2 * margin);
  };
  const auto py = [&](double y) {
    return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ofstream f(path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
    << height << "'>\n";
  f << "<rect width='100%' height='100%' fill='white'/>\n";
  f << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>"
    << title << "</text>\n";
  f << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
    << "' y2='" << height - margin << "' stroke='black'/>\n";
  f << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
    << height - margin << "' stroke='black'/>\n";
  int ci = 0;
  for (const auto& s : series) {
    const char* color = colors[ci % 8];
    f << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : s.points) f << px(x) << "," << py(y) << " ";
    f << "'/>\n";
    f << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * ci
      << "' font-size='11' fill='" << color << "'>" << s.label << "</text>\n";
    ++ci;
  }
  f << "</svg>\n";
}

std::string delta_label(double delta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d=%g", delta);
  return buf;
}

}  // namespace

PlotdataSummary plotdata(const std::filesystem::path& results_dir,
                         const std::filesystem::path& out_dir, bool svg) {
  PlotdataSummary summary;
  std::filesystem::create_directories(out_dir);

  const auto decay = load_curves(results_dir, "decay");
  const auto echo = load_curves(results_dir, "echo");

  // magnetization vs self-time, all scaling factors in one long table
  if (!decay.empty()) {
    CsvTable t;
    t.header = {"delta", "tau_s", "self_time_abs_s", "value"};
    std::vector<SvgSeries> series;
    for (const auto& sc : decay) {
      SvgSeries s;
      s.label = delta_label(sc.curve.meta.delta);
      for (std::size_t i = 0; i < sc.curve.times.size(); ++i) {
        const double st = std::abs(sc.curve.self_times[i]);
        t.rows.push_back({sc.curve.meta.delta, sc.curve.meta.tau, st, sc.curve.values[i]});
        s.points.emplace_back(st, sc.curve.values[i]);
      }
      series.push_back(std::move(s));
    }
    write_csv((out_dir / "fig2_selftime.csv").string(), t);
    summary.files.push_back("fig2_selftime.csv");
    if (svg) {
      write_svg(out_dir / "fig2_selftime.svg", "magnetization vs self-time", series);
      summary.files.push_back("fig2_selftime.svg");
    }
  }

  // spin counting vs self-time
  std::vector<std::filesystem::path> spincounts;
  if (std::filesystem::exists(results_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
      if (entry.path().filename().string().find("_spincount.csv") != std::string::npos) {
        spincounts.push_back(entry.path());
      }
    }
  }
  std::sort(spincounts.begin(), spincounts.end());
  if (!spincounts.empty()) {
    CsvTable t;
    t.header = {"self_time_abs_s", "n_corr", "second_moment", "source"};
    std::vector<SvgSeries> series;
    int src = 0;
    for (const auto& p : spincounts) {
      const CsvTable in = read_csv(p.string());
      SvgSeries s;
      s.label = p.filename().string();
      for (const auto& row : in.rows) {
        t.rows.push_back({std::abs(row[1]), row[2], row[3], static_cast<double>(src)});
        s.points.emplace_back(std::abs(row[1]), row[2]);
      }
      series.push_back(std::move(s));
      ++src;
    }
    write_csv((out_dir / "fig3_spincount.csv").string(), t);
    summary.files.push_back("fig3_spincount.csv");
    if (svg) {
      write_svg(out_dir / "fig3_spincount.svg", "correlated spins vs self-time", series);
      summary.files.push_back("fig3_spincount.svg");
    }
  }

  // echo-rate saturation: needs decay fits (T2), echo half-max (T3, TSigma)
  std::map<double, double> t2, t3;
  double t_sigma = 0.0;
  bool has_sigma = false;
  for (const auto& sc : decay) {
    const fit::FitResult fr = fit::fit_abragam(sc.curve);
    t2[std::abs(sc.curve.meta.delta)] = fr.derived.at("T2");
  }
  for (const auto& sc : echo) {
    if (sc.curve.meta.protocol != "echo") continue;
    const fit::HalfMaxResult hm = fit::half_max_time(sc.curve);
    if (hm.censored) continue;
    if (sc.curve.meta.delta == 0.0) {
      t_sigma = hm.time;
      has_sigma = true;
    } else {
      t3[std::abs(sc.curve.meta.delta)] = hm.time;
    }
  }
  if (has_sigma && !t3.empty() && !t2.empty()) {
    CsvTable t;
    t.header = {"delta", "t2_over_tsigma", "t2_over_t3"};
    std::vector<SvgSeries> series(1);
    series[0].label = "echo rates";
    for (const auto& [delta, t3v] : t3) {
      const auto it = t2.find(delta);
      if (it == t2.end()) continue;
      t.rows.push_back({delta, it->second / t_sigma, it->second / t3v});
      series[0].points.emplace_back(it->second / t_sigma, it->second / t3v);
    }
    if (!t.rows.empty()) {
      write_csv((out_dir / "fig4_saturation.csv").string(), t);
      summary.files.push_back("fig4_saturation.csv");
      if (svg) {
        write_svg(out_dir / "fig4_saturation.svg", "1/T3 vs 1/TSigma (units of 1/T2)",
                  series);
        summary.files.push_back("fig4_saturation.svg");
      }
    }
  }

  // delta = 0 echo and its two-regime fit
  for (const auto& sc : echo) {
    if (sc.curve.meta.delta != 0.0 || sc.curve.meta.protocol != "echo") continue;
    CsvTable t;
    t.header = {"time_s", "m_value", "fit_value"};
    bool have_fit = true;
    double gamma = 0.0, sigma = 0.0;
    try {
      const fit::FitResult fr = fit::fit_flambaum_izrailev(sc.curve);
      gamma = fr.param("gamma");
      sigma = std::abs(fr.param("sigma"));
    } catch (const Error&) {
      have_fit = false;
    }
    for (std::size_t i = 0; i < sc.curve.times.size(); ++i) {
      const double fitted =
          have_fit ? fit::models::flambaum_izrailev(sc.curve.times[i], gamma, sigma)
                   : 0.0;
      t.rows.push_back({sc.curve.times[i], sc.curve.values[i], fitted});
    }
    write_csv((out_dir / "fig_appendix_le0.csv").string(), t);
    summary.files.push_back("fig_appendix_le0.csv");
    if (svg) {
      std::vector<SvgSeries> series(2);
      series[0].label = "echo";
      series[1].label = "fit";
      for (const auto& row : t.rows) {
        series[0].points.emplace_back(row[0], row[1]);
        series[1].points.emplace_back(row[0], row[2]);
      }
      write_svg(out_dir / "fig_appendix_le0.svg", "delta = 0 echo", series);
      summary.files.push_back("fig_appendix_le0.svg");
    }
    break;
  }

  if (summary.files.empty()) {
    throw ComputeError("no curves matched: nothing to plot in " + results_dir.string());
  }
  return summary;
}

}  // namespace spinscale::runner
