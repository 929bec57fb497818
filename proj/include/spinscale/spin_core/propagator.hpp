#pragma once

#include "spinscale/types.hpp"

namespace spinscale {

// Time evolution under a fixed Hermitian generator. The eigendecomposition is
// done once at construction and reused for every t in a sweep; instances are
// immutable afterwards, so sharing one across worker threads is safe.
class Propagator {
 public:
  explicit Propagator(const Matrix& hamiltonian);

  // exp(-i H t)
  Matrix unitary(double t) const;

  // exp(i H t) A exp(-i H t)
  Matrix evolve(const Matrix& a, double t) const;

  // Tr[exp(iHt) A exp(-iHt) B] without leaving the eigenbasis; requires the
  // caller to pass eigenbasis images from to_eigenbasis().
  cxd trace_evolved(const Matrix& a_eig, const Matrix& b_eig, double t) const;

  Matrix to_eigenbasis(const Matrix& a) const;

  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

 private:
  Eigen::VectorXcd phases(double t) const;

  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

// One-shot exp(-i H t) via the dense Pade-style matrix exponential; prefer
// Propagator when more than a couple of time points are needed.
Matrix expm_unitary(const Matrix& hamiltonian, double t);

// exp(i H t) A exp(-i H t) through a freshly built Propagator.
Matrix evolve(const Matrix& hamiltonian, double t, const Matrix& a);

}  // namespace spinscale
