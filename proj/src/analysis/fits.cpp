#include "spinscale/analysis/fits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinscale/analysis/models.hpp"

namespace spinscale::fit {

double FitResult::param(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (param_names[i] == name) return params(static_cast<Eigen::Index>(i));
  }
  throw ValidationError("no fit parameter named '" + name + "'");
}

double FitResult::stderr_of(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (param_names[i] == name) return std_errors(static_cast<Eigen::Index>(i));
  }
  throw ValidationError("no fit parameter named '" + name + "'");
}

nlohmann::json FitResult::to_json() const {
  nlohmann::json jp;
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    jp[param_names[i]] = {{"value", params(static_cast<Eigen::Index>(i))},
                          {"stderr", std_errors(static_cast<Eigen::Index>(i))}};
  }
  return nlohmann::json{{"model", model},
                        {"params", jp},
                        {"residual_norm", residual_norm},
                        {"converged", converged},
                        {"right_censored", right_censored},
                        {"fallback", fallback},
                        {"derived", derived}};
}

namespace {

void check_curve(const proto::SignalCurve& curve, std::size_t min_points,
                 const char* model) {
  if (curve.times.size() != curve.values.size() || curve.times.size() < min_points) {
    throw ValidationError(std::string(model) + ": need at least " +
                          std::to_string(min_points) + " samples");
  }
}

FitResult from_lm(const char* model, std::vector<std::string> names,
                  const LeastSquaresResult& lm) {
  FitResult r;
  r.model = model;
  r.param_names = std::move(names);
  r.params = lm.params;
  r.std_errors = lm.std_errors;
  r.residual_norm = lm.residual_norm;
  r.converged = lm.converged;
  return r;
}

[[noreturn]] void fail_convergence(const char* model, const Eigen::VectorXd& initial) {
  std::ostringstream os;
  os << model << ": fit did not converge (initial guess:";
  for (Eigen::Index i = 0; i < initial.size(); ++i) os << " " << initial(i);
  os << ")";
  throw ComputeError(os.str());
}

}  // namespace

HalfMaxResult half_max_time(const proto::SignalCurve& curve) {
  check_curve(curve, 2, "half_max_time");
  const auto it = std::max_element(curve.values.begin(), curve.values.end());
  const std::size_t peak = static_cast<std::size_t>(it - curve.values.begin());
  const double target = 0.5 * *it;
  for (std::size_t i = peak + 1; i < curve.values.size(); ++i) {
    if (curve.values[i] <= target) {
      const double v0 = curve.values[i - 1], v1 = curve.values[i];
      const double t0 = curve.times[i - 1], t1 = curve.times[i];
      const double f = (v0 - target) / (v0 - v1);
      return {t0 + f * (t1 - t0), false};
    }
  }
  return {curve.times.back(), true};
}

FitResult fit_abragam(const proto::SignalCurve& curve) {
  check_curve(curve, 8, "fit_abragam");
  const auto& t = curve.times;
  const auto& v = curve.values;

  // w0 from the first zero crossing (sinc vanishes at w t = pi); when the
  // curve never crosses zero it carries no visible oscillation and w starts
  // at zero, where the model is smooth (sinc is even in w t).
  double w0 = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] > 0.0 && v[i] <= 0.0) {
      const double f = v[i - 1] / (v[i - 1] - v[i]);
      w0 = kPi / (t[i - 1] + f * (t[i] - t[i - 1]));
      break;
    }
  }
  double h0 = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < 0.95 && t[i] > 0.0) {
      const double c = 2.0 * (1.0 - v[i]) / (t[i] * t[i]) - w0 * w0 / 3.0;
      h0 = std::sqrt(std::max(c, 1e-6 * w0 * w0));
      break;
    }
  }
  if (h0 == 0.0) h0 = 0.3 * w0;

  const auto residual = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      r(i) = models::abragam(t[i], p(0), p(1)) - v[i];
    }
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << w0, h0;
  const LeastSquaresResult lm = levenberg_marquardt(residual, x0);
  if (!lm.converged) fail_convergence("fit_abragam", x0);

  FitResult r = from_lm("abragam", {"w", "h"}, lm);
  const double w = std::abs(r.params(0)), h = std::abs(r.params(1));
  const double inv_t2 = std::sqrt(h * h + w * w / 3.0);
  r.derived["T2"] = 1.0 / inv_t2;
  r.derived["M2"] = inv_t2 * inv_t2;
  if (curve.meta.delta != 0.0) {
    r.derived["inv_delta_T2"] = inv_t2 / std::abs(curve.meta.delta);
  }
  return r;
}

FitResult fit_flambaum_izrailev(const proto::SignalCurve& curve) {
  check_curve(curve, 5, "fit_flambaum_izrailev");
  const auto& t = curve.times;
  const auto& v = curve.values;

  double sigma0 = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < 0.9 && v[i] > 0.0 && t[i] > 0.0) {
      sigma0 = std::sqrt(-std::log(v[i])) / t[i];
      break;
    }
  }
  if (sigma0 <= 0.0) sigma0 = 1.0 / t.back();
  double gamma0 = 0.0;
  for (std::size_t i = v.size(); i-- > 1;) {
    if (v[i] > 1e-8) {
      gamma0 = std::max(-std::log(std::max(v[i], 1e-12)) / (2.0 * t[i]), 0.1 * sigma0);
      break;
    }
  }
  if (gamma0 <= 0.0) gamma0 = sigma0;

  const auto residual = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      r(i) = models::flambaum_izrailev(t[i], p(0), p(1)) - v[i];
    }
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << gamma0, sigma0;
  const LeastSquaresResult lm = levenberg_marquardt(residual, x0);
  if (!lm.converged) fail_convergence("fit_flambaum_izrailev", x0);

  FitResult r = from_lm("flambaum_izrailev", {"gamma", "sigma"}, lm);
  const double sigma = std::abs(r.params(1));
  r.derived["T_star"] = std::sqrt(2.0) / sigma;
  r.derived["gaussian_rate"] = sigma;
  r.derived["exponential_rate"] = 2.0 * std::abs(r.params(0));
  return r;
}

FgrResult fgr_rate(double gamma, double sigma) {
  if (gamma <= 0.0) throw ValidationError("fgr_rate: gamma must be positive");
  FgrResult r;
  r.sigma_1r = kPi * sigma * sigma / gamma;
  r.n1 = 1.0 / r.sigma_1r;
  return r;
}

FitResult fit_boltzmann(const proto::SignalCurve& curve) {
  check_curve(curve, 5, "fit_boltzmann");
  const HalfMaxResult hm = half_max_time(curve);
  if (hm.censored) {
    FitResult r;
    r.model = "boltzmann";
    r.right_censored = true;
    r.param_names = {"A1", "A2", "x0", "dx"};
    r.params = Eigen::VectorXd::Zero(4);
    r.std_errors = Eigen::VectorXd::Zero(4);
    r.derived["t_half"] = curve.times.back();
    return r;
  }
  const auto& t = curve.times;
  const auto& v = curve.values;
  const auto residual = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      r(i) = models::boltzmann(t[i], p(0), p(1), p(2), p(3)) - v[i];
    }
    return r;
  };
  Eigen::VectorXd x0(4);
  x0 << v.front(), v.back(), hm.time, std::max(0.1 * (t.back() - t.front()), 1e-12);
  const LeastSquaresResult lm = levenberg_marquardt(residual, x0);
  if (!lm.converged) fail_convergence("fit_boltzmann", x0);

  FitResult r = from_lm("boltzmann", {"A1", "A2", "x0", "dx"}, lm);
  r.derived["t_half"] = hm.time;  // fit independent by construction
  if (curve.meta.delta != 0.0) {
    r.derived["t_half_scaled"] = std::abs(curve.meta.delta) * hm.time;
  }
  return r;
}

FitResult fit_gaussian_mqc(const proto::MQCSpectrum& spectrum) {
  // populated orders counted over q >= 0 (the spectrum is symmetric)
  const int n_half = spectrum.q_steps / 2;
  std::vector<std::pair<double, double>> pts;  // (q^2, log S_q), weights S_q^2
  std::vector<double> weights;
  int populated = 0;
  for (int q = 0; q < n_half; ++q) {
    const double s = spectrum.at_order(q);
    if (s > 1e-12) {
      ++populated;
      pts.emplace_back(static_cast<double>(q) * q, std::log(s));
      weights.push_back(s * s);
    }
  }
  FitResult r;
  r.model = "gaussian_mqc";
  r.param_names = {"log_amplitude", "inv_n2"};

  const double q2 = otoc_second_moment(spectrum);
  if (populated < 3) {
    r.fallback = true;
    r.params = Eigen::VectorXd::Zero(2);
    r.std_errors = Eigen::VectorXd::Zero(2);
    r.derived["n_corr"] = std::sqrt(std::max(q2, 0.0));
    r.derived["second_moment"] = q2;
    return r;
  }
  // weighted linear LS: log S = a - b q^2
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = weights[i], x = pts[i].first, y = pts[i].second;
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
  }
  const double denom = sw * swxx - swx * swx;
  if (std::abs(denom) < 1e-300) throw ComputeError("fit_gaussian_mqc: degenerate orders");
  const double b = -(sw * swxy - swx * swy) / denom;  // = 1/N^2
  const double a = (swy - (-b) * swx) / sw;
  r.params = Eigen::VectorXd(2);
  r.params << a, b;
  r.std_errors = Eigen::VectorXd::Zero(2);
  r.converged = true;
  if (b <= 0.0) {
    r.fallback = true;
    r.derived["n_corr"] = std::sqrt(std::max(q2, 0.0));
  } else {
    r.derived["n_corr"] = 1.0 / std::sqrt(b);
  }
  r.derived["second_moment"] = q2;
  return r;
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw ValidationError("fit_power_law: need at least 4 points");
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x <= 0.0 || y <= 0.0) continue;
    logs.emplace_back(std::log(x), std::log(y));
  }
  if (logs.size() < 4) {
    throw ValidationError("fit_power_law: need at least 4 positive points");
  }
  FitResult ols = linear_fit(logs);
  FitResult r;
  r.model = "power_law";
  r.param_names = {"amplitude", "exponent"};
  r.params = Eigen::VectorXd(2);
  const double amplitude = std::exp(ols.param("intercept"));
  r.params << amplitude, ols.param("slope");
  r.std_errors = Eigen::VectorXd(2);
  r.std_errors << amplitude * ols.stderr_of("intercept"), ols.stderr_of("slope");
  r.residual_norm = ols.residual_norm;
  r.converged = true;
  return r;
}

FitResult fit_saturation(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ValidationError("fit_saturation: need at least 3 points");
  const auto residual = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      r(i) = models::saturation(points[i].first, p(0)) - points[i].second;
    }
    return r;
  };
  double y_min = points.front().second;
  for (const auto& [x, y] : points) y_min = std::min(y_min, y);
  Eigen::VectorXd x0(1);
  x0 << std::max(y_min, 1e-3);
  const LeastSquaresResult lm = levenberg_marquardt(residual, x0);
  if (!lm.converged) fail_convergence("fit_saturation", x0);
  FitResult r = from_lm("saturation", {"R"}, lm);
  r.params(0) = std::abs(r.params(0));
  r.derived["R"] = r.params(0);
  return r;
}

FitResult linear_fit(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 2) throw ValidationError("linear_fit: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300 * std::max(1.0, sxx)) {
    throw ValidationError("linear_fit: degenerate abscissa");
  }
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double e = y - slope * x - intercept;
    ss_res += e * e;
  }
  const double s2 = n > 2 ? ss_res / (n - 2) : 0.0;
  FitResult r;
  r.model = "linear";
  r.param_names = {"slope", "intercept"};
  r.params = Eigen::VectorXd(2);
  r.params << slope, intercept;
  r.std_errors = Eigen::VectorXd(2);
  r.std_errors << std::sqrt(s2 * n / denom), std::sqrt(s2 * sxx / denom);
  r.residual_norm = std::sqrt(ss_res);
  r.converged = true;
  return r;
}

}  // namespace spinscale::fit
