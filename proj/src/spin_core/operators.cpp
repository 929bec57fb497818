#include "spinscale/spin_core/operators.hpp"

#include <cmath>
#include <string>

#include "spinscale/kernels/kernels.hpp"

namespace spinscale {

Matrix single_spin_operator(const SpinSystem& system, int spin, Axis axis) {
  if (spin < 0 || spin >= system.n_spins()) {
    throw ValidationError("spin index out of range");
  }
  const std::size_t dim = system.dim();
  Matrix op = Matrix::Zero(dim, dim);
  const std::uint32_t mask = 1u << spin;
  for (std::uint32_t b = 0; b < dim; ++b) {
    switch (axis) {
      case Axis::z:
        op(b, b) = 0.5 * spin_sign(b, spin);
        break;
      case Axis::x:
        op(b ^ mask, b) = 0.5;
        break;
      case Axis::y:
        // up -> down carries +i/2, down -> up carries -i/2
        op(b ^ mask, b) = spin_is_down(b, spin) ? cxd{0.0, -0.5} : cxd{0.0, 0.5};
        break;
    }
  }
  return op;
}

Matrix collective_operator(const SpinSystem& system, Axis axis) {
  const std::size_t dim = system.dim();
  Matrix op = Matrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    for (int i = 0; i < system.n_spins(); ++i) {
      const std::uint32_t mask = 1u << i;
      switch (axis) {
        case Axis::z:
          op(b, b) += 0.5 * spin_sign(b, i);
          break;
        case Axis::x:
          op(b ^ mask, b) += 0.5;
          break;
        case Axis::y:
          op(b ^ mask, b) += spin_is_down(b, i) ? cxd{0.0, -0.5} : cxd{0.0, 0.5};
          break;
      }
    }
  }
  return op;
}

Matrix global_xy_rotation(const SpinSystem& system, double phase, double angle) {
  // exp(-i angle (cos p Ix + sin p Iy)) for one spin:
  //   cos(a/2) 1 - i sin(a/2) (cos p sx + sin p sy)
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd r;
  r << cxd{c, 0.0}, -kImag * s * std::exp(-kImag * phase),
      -kImag * s * std::exp(kImag * phase), cxd{c, 0.0};
  Matrix u = Matrix::Ones(1, 1);
  for (int i = 0; i < system.n_spins(); ++i) {
    const Matrix prev = std::move(u);
    const std::size_t d = prev.rows();
    u = Matrix(2 * d, 2 * d);
    // spin i is bit i, so the new factor is the slow index
    u.topLeftCorner(d, d) = r(0, 0) * prev;
    u.topRightCorner(d, d) = r(0, 1) * prev;
    u.bottomLeftCorner(d, d) = r(1, 0) * prev;
    u.bottomRightCorner(d, d) = r(1, 1) * prev;
  }
  return u;
}

Matrix global_z_rotation(const SpinSystem& system, double phi) {
  const std::size_t dim = system.dim();
  Matrix u = Matrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    const double m = 0.5 * twice_magnetic_quantum(b, system.n_spins());
    u(b, b) = std::exp(-kImag * phi * m);
  }
  return u;
}

double iz_norm(const SpinSystem& system) {
  return 0.25 * system.n_spins() * static_cast<double>(system.dim());
}

double correlator(const Matrix& a, const Matrix& b, const SpinSystem& system) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw ValidationError("correlator: dimension mismatch");
  }
  const cxd tr = kernels::conj_dot(a.data(), b.data(), a.size());
  return tr.real() / iz_norm(system);
}

double hermiticity_defect(const Matrix& a) {
  const Matrix adj = a.adjoint();
  return kernels::max_abs_diff(a.data(), adj.data(), a.size());
}

bool is_hermitian(const Matrix& a, double tol) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
  return hermiticity_defect(a) <= tol * scale;
}

void require_hermitian(const Matrix& a, const char* what) {
  if (!is_hermitian(a)) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian");
  }
}

}  // namespace spinscale
