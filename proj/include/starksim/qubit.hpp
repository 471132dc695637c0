#pragma once

#include <Eigen/Dense>
#include <complex>

namespace starksim {

// 2x2 density matrix on the addressed transition subspace. Basis: |0> is the
// lower level, |1> the upper. The coherence accessor returns <1|rho|0>, whose
// phase advances as e^{+i 2 pi Delta t} under positive detuning.
struct QubitState {
  Eigen::Matrix2cd rho;

  static QubitState ground() {
    QubitState q;
    q.rho << 1, 0, 0, 0;
    return q;
  }

  static QubitState excited() {
    QubitState q;
    q.rho << 0, 0, 0, 1;
    return q;
  }

  static QubitState from_bloch(double x, double y, double z) {
    QubitState q;
    const std::complex<double> i(0, 1);
    q.rho << 0.5 * (1 + z), 0.5 * (x - i * y), 0.5 * (x + i * y),
        0.5 * (1 - z);
    return q;
  }

  double population_ground() const { return rho(0, 0).real(); }
  double population_excited() const { return rho(1, 1).real(); }
  std::complex<double> coherence() const { return rho(1, 0); }

  Eigen::Vector3d bloch() const {
    return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
            (rho(0, 0) - rho(1, 1)).real()};
  }

  // Hermitian, unit trace, positive semidefinite within tolerance.
  bool is_physical(double tol = 1e-10) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    return es.eigenvalues().minCoeff() >= -tol;
  }
};

}  // namespace starksim
