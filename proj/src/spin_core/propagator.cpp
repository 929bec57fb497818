#include "spinscale/spin_core/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "spinscale/kernels/kernels.hpp"
#include "spinscale/spin_core/operators.hpp"

namespace spinscale {

Propagator::Propagator(const Matrix& hamiltonian) {
  require_hermitian(hamiltonian, "Propagator");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw ComputeError("Propagator: eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd Propagator::phases(double t) const {
  return (kImag * t * eigenvalues_.array()).exp();  // exp(+i lambda t)
}

Matrix Propagator::unitary(double t) const {
  // exp(-i H t) = V exp(-i Lambda t) V^dag
  const Eigen::VectorXcd p = phases(-t);
  return eigenvectors_ * p.asDiagonal() * eigenvectors_.adjoint();
}

Matrix Propagator::to_eigenbasis(const Matrix& a) const {
  return eigenvectors_.adjoint() * a * eigenvectors_;
}

Matrix Propagator::evolve(const Matrix& a, double t) const {
  Matrix a_eig = to_eigenbasis(a);
  Matrix rotated(a_eig.rows(), a_eig.cols());
  const Eigen::VectorXcd p = phases(t);
  kernels::phase_conjugate(rotated.data(), a_eig.data(), p.data(),
                           static_cast<std::size_t>(a_eig.rows()));
  return eigenvectors_ * rotated * eigenvectors_.adjoint();
}

cxd Propagator::trace_evolved(const Matrix& a_eig, const Matrix& b_eig, double t) const {
  // Tr[A(t) B] = sum_ij (A_eig)_ij e^{i(l_i - l_j)t} (B_eig)_ji; for Hermitian
  // B_eig the second factor is conj((B_eig)_ij), which is exactly conj_dot of
  // B_eig with the phase-conjugated A_eig.
  Matrix rotated(a_eig.rows(), a_eig.cols());
  const Eigen::VectorXcd p = phases(t);
  kernels::phase_conjugate(rotated.data(), a_eig.data(), p.data(),
                           static_cast<std::size_t>(a_eig.rows()));
  return kernels::conj_dot(b_eig.data(), rotated.data(), rotated.size());
}

Matrix expm_unitary(const Matrix& hamiltonian, double t) {
  require_hermitian(hamiltonian, "expm_unitary");
  const Matrix gen = -kImag * t * hamiltonian;
  return gen.exp();
}

Matrix evolve(const Matrix& hamiltonian, double t, const Matrix& a) {
  return Propagator(hamiltonian).evolve(a, t);
}

}  // namespace spinscale
