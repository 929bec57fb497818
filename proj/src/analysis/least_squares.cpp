#include "spinscale/analysis/least_squares.hpp"

#include <cmath>

namespace spinscale::fit {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x,
                                 int m) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd jac(m, n);
  for (int j = 0; j < n; ++j) {
    const double h = 1e-7 * std::max(std::abs(x(j)), 1e-3);
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
  }
  return jac;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFn& residual,
                                       Eigen::VectorXd initial,
                                       const LeastSquaresOptions& options) {
  LeastSquaresResult result;
  Eigen::VectorXd x = std::move(initial);
  Eigen::VectorXd r = residual(x);
  const int m = static_cast<int>(r.size());
  const int n = static_cast<int>(x.size());
  if (m < n) throw ValidationError("least squares: fewer residuals than parameters");

  double cost = 0.5 * r.squaredNorm();
  double lambda = options.initial_lambda;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::MatrixXd jac = numeric_jacobian(residual, x, m);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    if (jtr.cwiseAbs().maxCoeff() < 1e-16 * std::max(1.0, cost)) {
      result.converged = true;
      break;
    }
    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
      const Eigen::VectorXd x_new = x + step;
      const Eigen::VectorXd r_new = residual(x_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      if (std::isfinite(cost_new) && cost_new < cost) {
        const double dcost = cost - cost_new;
        const double dx = step.norm();
        x = x_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 3.0, 1e-14);
        stepped = true;
        if (dcost <= options.ftol * std::max(cost, 1e-300) ||
            dx <= options.xtol * (1.0 + x.norm())) {
          result.converged = true;
        }
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) {
      // no downhill step found at any damping: stationary point
      result.converged = true;
      break;
    }
    if (result.converged) break;
  }

  result.params = x;
  result.iterations = iter + 1;
  result.residual_norm = std::sqrt(2.0 * cost);

  const Eigen::MatrixXd jac = numeric_jacobian(residual, x, m);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const double s2 = m > n ? (2.0 * cost) / (m - n) : 0.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (lu.isInvertible()) cov = s2 * lu.inverse();
  result.covariance = cov;
  result.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return result;
}

}  // namespace spinscale::fit
