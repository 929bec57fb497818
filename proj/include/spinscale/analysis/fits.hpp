#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spinscale/analysis/least_squares.hpp"
#include "spinscale/protocols/protocols.hpp"

namespace spinscale::fit {

struct FitResult {
  std::string model;
  std::vector<std::string> param_names;
  Eigen::VectorXd params;
  Eigen::VectorXd std_errors;
  double residual_norm = 0.0;
  bool converged = false;
  bool right_censored = false;
  bool fallback = false;
  std::map<std::string, double> derived;

  double param(const std::string& name) const;
  double stderr_of(const std::string& name) const;
  nlohmann::json to_json() const;
};

struct HalfMaxResult {
  double time = 0.0;
  bool censored = false;  // the curve never reaches half of its maximum
};

// Time where the curve first falls to half its maximum, by monotone linear
// interpolation between the bracketing samples; independent of any fit and
// invariant under positive rescaling of the values.
HalfMaxResult half_max_time(const proto::SignalCurve& curve);

// P(t) = sinc(w t) exp(-(h t)^2/2); derived T2 = 1/sqrt(h^2 + w^2/3), the
// second moment M2 = 1/T2^2, and 1/(delta T2) when the curve has delta != 0.
FitResult fit_abragam(const proto::SignalCurve& curve);

// f(t) = exp(2 G^2/s^2 - 2 sqrt(G^4/s^4 + G^2 t^2)); derived T* = sqrt(2)/s,
// short-time Gaussian rate s and long-time exponential rate 2 G.
FitResult fit_flambaum_izrailev(const proto::SignalCurve& curve);

// sigma_1R = pi sigma^2 / gamma and the connected-state density N1 = 1/sigma_1R.
struct FgrResult {
  double sigma_1r = 0.0;
  double n1 = 0.0;
};
FgrResult fgr_rate(double gamma, double sigma);

// Four-parameter sigmoid; derived t_half from half_max_time (fit independent)
// and, for delta != 0 curves, the scaled time delta * t_half.
FitResult fit_boltzmann(const proto::SignalCurve& curve);

// Gaussian fit of log S_q over populated orders: S_q ~ exp(-q^2 / N^2).
// Falls back (flagged) to N = sqrt(sum q^2 S_q) when fewer than three
// distinct non-negative orders are populated.
FitResult fit_gaussian_mqc(const proto::MQCSpectrum& spectrum);

// N(dt) = A dt^b by least squares in log-log space; needs >= 4 points.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

// (T2/T3) = sqrt(R^2 + (T2/TS)^2): one-parameter fit for the saturation R.
FitResult fit_saturation(const std::vector<std::pair<double, double>>& points);

// Ordinary least squares y = slope x + intercept with standard errors.
FitResult linear_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace spinscale::fit
