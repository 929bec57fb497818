#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinscale {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cxd kImag{0.0, 1.0};

// Base for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: config schema, parameter bounds, dimension mismatches.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Dense-matrix size limit exceeded (N > 14 spins).
class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure at runtime (fit non-convergence, aliasing, ...).
// The CLI maps these to exit code 1.
class ComputeError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinscale
