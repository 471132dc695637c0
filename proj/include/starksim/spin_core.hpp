#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "starksim/constants.hpp"
#include "starksim/errors.hpp"
#include "starksim/spin_system.hpp"

namespace starksim {

namespace detail {

// Angular momentum operators for spin j, basis ordered m = j, j-1, ..., -j.
struct SpinOps {
  Eigen::MatrixXcd x, y, z;
};

inline SpinOps spin_operators(HalfInt j) {
  const int dim = j.twice() + 1;
  const double jv = j.value();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = jv - k;
    z(k, k) = m;
    if (k >= 1) {
      // |m+1><m| element of J+
      plus(k - 1, k) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
    }
  }
  const Eigen::MatrixXcd minus = plus.adjoint();
  SpinOps ops;
  ops.x = 0.5 * (plus + minus);
  ops.y = std::complex<double>(0, -0.5) * (plus - minus);
  ops.z = z;
  return ops;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

// H/h = (g_e mu_B / h) B0 Sz - gamma_n B0 Iz + A S.I, in Hz.
// Basis: |m_S, m_I> with m_S = +1/2 block first, m_I descending within each
// block.
inline Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys,
                                          double b0_tesla) {
  sys.validate();
  if (b0_tesla < 0.0) throw std::domain_error("B0 must be >= 0");

  const detail::SpinOps s = detail::spin_operators(half(1));
  const detail::SpinOps n = detail::spin_operators(sys.nuclear_spin);
  const int di = sys.nuclear_spin.twice() + 1;
  const Eigen::MatrixXcd ids = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd idi = Eigen::MatrixXcd::Identity(di, di);

  const double fe = sys.electron_g * kMuBOverH * b0_tesla;
  const double fn = sys.gamma_n_hz_per_t * b0_tesla;

  Eigen::MatrixXcd h = fe * detail::kron(s.z, idi) - fn * detail::kron(ids, n.z);
  h += sys.hyperfine_hz * (detail::kron(s.x, n.x) + detail::kron(s.y, n.y) +
                           detail::kron(s.z, n.z));
  return h;
}

// One eigenlevel with its high-field product-state assignment.
struct LabeledLevel {
  double energy_hz;
  HalfInt m_s;
  HalfInt m_i;
  double overlap;  // squared amplitude of the dominant product component
};

// Diagonalizes and assigns each eigenstate the |m_S, m_I> of its dominant
// component. Requires dominant overlap >= 0.7, else the labeling is
// ambiguous (too far from the high-field regime).
inline std::vector<LabeledLevel> labeled_levels(const SpinSystem& sys,
                                                double b0_tesla) {
  const Eigen::MatrixXcd h = build_hamiltonian(sys, b0_tesla);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  const int dim = sys.dim();
  const int di = sys.nuclear_spin.twice() + 1;
  const int ti = sys.nuclear_spin.twice();

  std::vector<LabeledLevel> levels;
  levels.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(k);
    int best = 0;
    double best_w = 0.0;
    for (int idx = 0; idx < dim; ++idx) {
      const double w = std::norm(v(idx));
      if (w > best_w) {
        best_w = w;
        best = idx;
      }
    }
    if (best_w < 0.7) {
      throw IdentificationError(
          "eigenstate has no dominant product component (overlap " +
          std::to_string(best_w) + " < 0.7); state labels are ambiguous");
    }
    LabeledLevel lvl;
    lvl.energy_hz = solver.eigenvalues()(k);
    lvl.m_s = half(best < di ? 1 : -1);
    lvl.m_i = half(ti - 2 * (best % di));
    lvl.overlap = best_w;
    levels.push_back(lvl);
  }
  return levels;
}

// Positive transition frequency |E_upper - E_lower| of the labeled pair.
inline double transition_frequency(const SpinSystem& sys, double b0_tesla,
                                   const TransitionLabel& t) {
  t.validate(sys);
  const std::vector<LabeledLevel> levels = labeled_levels(sys, b0_tesla);

  auto find = [&](HalfInt m_s, HalfInt m_i) -> double {
    for (const LabeledLevel& lvl : levels) {
      if (lvl.m_s == m_s && lvl.m_i == m_i) return lvl.energy_hz;
    }
    throw IdentificationError("no eigenstate labeled (m_S=" + m_s.str() +
                              ", m_I=" + m_i.str() + ")");
  };

  double ea, eb;
  if (t.kind == TransitionKind::Esr) {
    ea = find(half(1), t.spectator);
    eb = find(half(-1), t.spectator);
  } else {
    ea = find(t.spectator, t.nuclear_upper);
    eb = find(t.spectator, t.nuclear_upper - half(2));
  }
  return std::abs(ea - eb);
}

struct Sensitivities {
  double df_da;     // dimensionless
  double df_dg_hz;  // Hz per unit g
};

// Central finite differences of the transition frequency with respect to the
// hyperfine coupling and the electron g-factor, relative step 1e-6.
inline Sensitivities transition_sensitivities(const SpinSystem& sys,
                                              double b0_tesla,
                                              const TransitionLabel& t) {
  constexpr double kRelStep = 1e-6;

  SpinSystem up = sys, dn = sys;
  up.hyperfine_hz = sys.hyperfine_hz * (1.0 + kRelStep);
  dn.hyperfine_hz = sys.hyperfine_hz * (1.0 - kRelStep);
  const double da = up.hyperfine_hz - dn.hyperfine_hz;
  Sensitivities out;
  out.df_da = (transition_frequency(up, b0_tesla, t) -
               transition_frequency(dn, b0_tesla, t)) /
              da;

  up = sys;
  dn = sys;
  up.electron_g = sys.electron_g * (1.0 + kRelStep);
  dn.electron_g = sys.electron_g * (1.0 - kRelStep);
  const double dg = up.electron_g - dn.electron_g;
  out.df_dg_hz = (transition_frequency(up, b0_tesla, t) -
                  transition_frequency(dn, b0_tesla, t)) /
                 dg;
  return out;
}

}  // namespace starksim
