#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <iostream>
#include <vector>

#include "starksim/errors.hpp"
#include "starksim/qubit.hpp"

namespace starksim {

namespace pauli {

inline const std::array<Eigen::Matrix2cd, 4>& basis() {
  static const std::array<Eigen::Matrix2cd, 4> ops = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    const std::complex<double> i(0, 1);
    p[0] << 1, 0, 0, 1;   // I
    p[1] << 0, 1, 1, 0;   // X
    p[2] << 0, -i, i, 0;  // Y
    p[3] << 1, 0, 0, -1;  // Z
    return p;
  }();
  return ops;
}

}  // namespace pauli

// 4x4 process matrix chi over {I, X, Y, Z}: Lambda(rho) = sum_mn chi_mn
// sigma_m rho sigma_n. Normalized to unit trace so Tr(chi chi_ideal) = 1 for
// a perfect match against a unitary target.
struct ProcessMatrix {
  Eigen::Matrix4cd chi;

  static ProcessMatrix identity() { return from_unitary(pauli::basis()[0]); }

  // chi of a unitary channel: decompose U over the Pauli basis, chi = a a^+.
  static ProcessMatrix from_unitary(const Eigen::Matrix2cd& u) {
    Eigen::Vector4cd a;
    for (int m = 0; m < 4; ++m) {
      a(m) = 0.5 * (pauli::basis()[m].adjoint() * u).trace();
    }
    ProcessMatrix p;
    p.chi = a * a.adjoint();
    const double tr = p.chi.trace().real();
    p.chi /= tr;
    return p;
  }

  bool is_physical(double tol = 1e-9) const {
    if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(chi.trace().real() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(chi);
    return es.eigenvalues().minCoeff() >= -tol;
  }
};

// rho = (I + <X> sx + <Y> sy + <Z> sz)/2, projected to the nearest unit-trace
// PSD state if the Bloch vector leaks outside the sphere. A leak beyond
// 1 + 1e-6 is reported through *flagged when provided.
inline QubitState state_tomography(double ex, double ey, double ez,
                                   bool* flagged = nullptr) {
  for (double v : {ex, ey, ez}) {
    if (!(v >= -1.0 - 1e-6 && v <= 1.0 + 1e-6)) {
      throw std::domain_error("expectation value outside [-1, 1]");
    }
  }
  const double norm = std::sqrt(ex * ex + ey * ey + ez * ez);
  if (flagged) *flagged = norm > 1.0 + 1e-6;

  QubitState q = QubitState::from_bloch(ex, ey, ez);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(q.rho);
  if (es.eigenvalues().minCoeff() < 0.0) {
    // nearest unit-trace PSD 2x2 state: clip the negative eigenvalue
    Eigen::Vector2d ev = es.eigenvalues();
    Eigen::Vector2d clipped(std::max(ev(0), 0.0), std::max(ev(1), 0.0));
    clipped /= clipped.sum();
    q.rho = es.eigenvectors() * clipped.asDiagonal() *
            es.eigenvectors().adjoint();
  }
  return q;
}

// The six cardinal preparation states +-X, +-Y, +-Z.
inline std::vector<QubitState> cardinal_states() {
  return {QubitState::from_bloch(1, 0, 0),  QubitState::from_bloch(-1, 0, 0),
          QubitState::from_bloch(0, 1, 0),  QubitState::from_bloch(0, -1, 0),
          QubitState::from_bloch(0, 0, 1),  QubitState::from_bloch(0, 0, -1)};
}

// Linear-inversion process tomography: least-squares chi such that
// Lambda(rho_k) = sum_mn chi_mn sigma_m rho_k sigma_n matches the measured
// outputs, then Hermitized, trace-normalized and clipped to positive
// semidefinite.
inline ProcessMatrix process_matrix(const std::vector<QubitState>& inputs,
                                    const std::vector<QubitState>& outputs) {
  if (inputs.size() != outputs.size() || inputs.empty()) {
    throw SpanError("input/output state counts differ or are empty");
  }

  // the inputs must span the 4-dimensional operator space
  {
    Eigen::MatrixXcd span(4, inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const Eigen::Matrix2cd& r = inputs[k].rho;
      span.col(k) << r(0, 0), r(0, 1), r(1, 0), r(1, 1);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span);
    const double tol = 1e-9 * svd.singularValues()(0);
    if (svd.rank() < 4 || svd.singularValues().minCoeff() < tol) {
      throw SpanError(
          "input states do not span the operator space (need >= 4 linearly "
          "independent density matrices)");
    }
  }

  const std::size_t neq = 4 * inputs.size();
  Eigen::MatrixXcd a(neq, 16);
  Eigen::VectorXcd b(neq);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        const Eigen::Matrix2cd basis_term =
            pauli::basis()[m] * inputs[k].rho * pauli::basis()[n];
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            a(4 * k + 2 * i + j, 4 * m + n) = basis_term(i, j);
      }
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(4 * k + 2 * i + j) = outputs[k].rho(i, j);
  }

  const Eigen::VectorXcd x =
      a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  Eigen::Matrix4cd chi;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) chi(m, n) = x(4 * m + n);

  chi = 0.5 * (chi + chi.adjoint()).eval();

  // clip to PSD, renormalize trace
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(chi);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) ev(i) = std::max(ev(i), 0.0);
  const double tr = ev.sum();
  if (!(tr > 0)) throw SpanError("reconstructed process has zero trace");
  ev /= tr;
  ProcessMatrix out;
  out.chi = es.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() *
            es.eigenvectors().adjoint();
  return out;
}

// F_proc = Re Tr(chi_exp chi_ideal), clamped to [0, 1] (clamping is logged).
inline double process_fidelity(const ProcessMatrix& chi_exp,
                               const ProcessMatrix& chi_ideal) {
  const double f = (chi_exp.chi * chi_ideal.chi).trace().real();
  if (f < 0.0 || f > 1.0) {
    std::clog << "process_fidelity: clamping " << f << " into [0, 1]\n";
    return std::min(1.0, std::max(0.0, f));
  }
  return f;
}

}  // namespace starksim
