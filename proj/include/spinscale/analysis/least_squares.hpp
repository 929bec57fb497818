#pragma once

#include <functional>

#include <Eigen/Dense>

#include "spinscale/types.hpp"

namespace spinscale::fit {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
  int max_iterations = 400;
  double ftol = 1e-14;   // relative cost change
  double xtol = 1e-13;   // relative step size
  double initial_lambda = 1e-3;
};

struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::VectorXd std_errors;   // 1-sigma from s^2 (J^T J)^-1
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;   // ||r||
  int iterations = 0;
  bool converged = false;
};

// Damped Gauss-Newton (Levenberg-Marquardt) with a central-difference
// Jacobian. Small and predictable; all fits in this library have <= 4
// parameters and smooth residuals.
LeastSquaresResult levenberg_marquardt(const ResidualFn& residual,
                                       Eigen::VectorXd initial,
                                       const LeastSquaresOptions& options = {});

}  // namespace spinscale::fit
