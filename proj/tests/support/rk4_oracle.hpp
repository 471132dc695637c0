#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "starksim/constants.hpp"
#include "starksim/qubit.hpp"

namespace oracle {

// Brute-force propagation of d rho/dt = -i 2 pi [H, rho] with
// H = Delta sz/2 + f1 (cos phi sx + sin phi sy)/2, fixed-step RK4.
// Independent of the closed-form rotation used by the engine.
inline starksim::QubitState propagate_rk4(const starksim::QubitState& state,
                                          double detuning_hz, double f1_hz,
                                          double phase_rad, double tau_s,
                                          int steps = 10000) {
  using Mat = Eigen::Matrix2cd;
  const std::complex<double> i(0, 1);
  Mat h;
  const double hx = 0.5 * f1_hz * std::cos(phase_rad);
  const double hy = 0.5 * f1_hz * std::sin(phase_rad);
  const double hz = 0.5 * detuning_hz;
  h << hz, hx - i * hy, hx + i * hy, -hz;

  auto deriv = [&](const Mat& rho) -> Mat {
    return -i * starksim::kTwoPi * (h * rho - rho * h);
  };

  Mat rho = state.rho;
  const double dt = tau_s / steps;
  for (int n = 0; n < steps; ++n) {
    const Mat k1 = deriv(rho);
    const Mat k2 = deriv(rho + 0.5 * dt * k1);
    const Mat k3 = deriv(rho + 0.5 * dt * k2);
    const Mat k4 = deriv(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  starksim::QubitState out;
  out.rho = rho;
  return out;
}

}  // namespace oracle
