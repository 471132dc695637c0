#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "starksim/constants.hpp"
#include "starksim/qubit.hpp"
#include "starksim/stark.hpp"

namespace starksim {

enum class Bandwidth { Selective, Hard };

struct MwPulse {
  double rabi_hz = 0.0;
  double phase_rad = 0.0;
  double duration_s = 0.0;
  Bandwidth bandwidth = Bandwidth::Selective;
};

struct RfPulse {
  double rabi_hz = 0.0;
  double phase_rad = 0.0;
  double duration_s = 0.0;
  Bandwidth bandwidth = Bandwidth::Selective;
};

enum class VoltageMode { Unipolar, BipolarPair, SquareWave };

struct VoltageEvent {
  double amplitude_v = 0.0;
  double duration_s = 0.0;
  VoltageMode mode = VoltageMode::Unipolar;
  double square_freq_hz = 0.0;  // square-wave alternation frequency

  void validate() const {
    if (duration_s < 0) throw std::domain_error("voltage duration must be >= 0");
    if (mode == VoltageMode::SquareWave && !(square_freq_hz > 0)) {
      throw std::domain_error("square-wave frequency must be > 0");
    }
  }
};

struct Delay {
  double duration_s = 0.0;
};

struct ReadoutMarker {};

using PulseEvent = std::variant<MwPulse, RfPulse, VoltageEvent, Delay, ReadoutMarker>;

inline double event_duration(const PulseEvent& ev) {
  return std::visit(
      [](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ReadoutMarker>) return 0.0;
        else return e.duration_s;
      },
      ev);
}

inline constexpr double kInfiniteT2 = std::numeric_limits<double>::infinity();

// Everything fixed for the duration of one experiment: the system, the
// addressed transition, the plate geometry, and phenomenological decoherence
// constants. Caches the nominal transition frequency and the quadratic Stark
// coefficient so inner loops avoid re-diagonalizing.
struct ExperimentContext {
  SpinSystem system;
  double b0_tesla = 0.0;
  TransitionLabel addressed;
  double thickness_mm = 1.0;
  double t2_esr_s = kInfiniteT2;
  double t2_nmr_s = kInfiniteT2;

  double nominal_freq_hz = 0.0;  // addressed transition at E = 0, nominal donor
  double quad_coeff = 0.0;       // Hz per (V/um)^2

  static ExperimentContext create(const SpinSystem& sys, double b0,
                                  const TransitionLabel& addressed,
                                  double thickness_mm,
                                  double t2_esr = kInfiniteT2,
                                  double t2_nmr = kInfiniteT2) {
    if (!(thickness_mm > 0)) throw std::domain_error("thickness must be > 0");
    ExperimentContext ctx;
    ctx.system = sys;
    ctx.b0_tesla = b0;
    ctx.addressed = addressed;
    ctx.thickness_mm = thickness_mm;
    ctx.t2_esr_s = t2_esr;
    ctx.t2_nmr_s = t2_nmr;
    ctx.nominal_freq_hz = transition_frequency(sys, b0, addressed);
    ctx.quad_coeff = quadratic_shift_coefficient(sys, b0, addressed);
    return ctx;
  }

  // Applied field in V/um for a plate voltage.
  double efield(double volts) const { return volts / (thickness_mm * 1000.0); }

  double t2() const {
    return addressed.kind == TransitionKind::Esr ? t2_esr_s : t2_nmr_s;
  }

  // Detuning of the addressed line for one donor at signed local-frame field
  // E (V/um): quadratic + linear Stark at the local field, plus the donor's
  // magnetic detuning.
  double stark_detuning(double e_applied, const DonorInstance& d) const {
    const double e_local = d.field_scale * e_applied;
    return quad_coeff * (e_local * e_local) +
           d.linear_stark_hz_per_field * e_local + d.magnetic_detuning_hz;
  }
};

// Off-resonant rotation in the rotating frame:
//   U = exp[-i 2 pi tau (Delta sz/2 + f1 (cos phi sx + sin phi sy)/2)],
// evaluated in closed form as a rotation of angle 2 pi tau sqrt(Delta^2+f1^2)
// about the tilted axis.
inline QubitState propagate_pulse(const QubitState& state, double detuning_hz,
                                  double f1_hz, double phase_rad,
                                  double tau_s) {
  if (tau_s < 0) throw std::domain_error("pulse duration must be >= 0");
  const double omega = std::hypot(detuning_hz, f1_hz);
  if (omega == 0.0 || tau_s == 0.0) return state;

  const double angle = kTwoPi * omega * tau_s;
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const double nx = f1_hz * std::cos(phase_rad) / omega;
  const double ny = f1_hz * std::sin(phase_rad) / omega;
  const double nz = detuning_hz / omega;

  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd u;
  u << c - i * s * nz, -i * s * (nx - i * ny), -i * s * (nx + i * ny),
      c + i * s * nz;

  QubitState out;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

// Signed-amplitude segments (volts, seconds) realizing a voltage event.
// Square-wave segments alternate polarity every half period starting
// positive; a trailing partial segment is kept exactly.
inline std::vector<std::pair<double, double>> voltage_segments(
    const VoltageEvent& v) {
  v.validate();
  std::vector<std::pair<double, double>> segs;
  if (v.duration_s == 0.0) return segs;
  switch (v.mode) {
    case VoltageMode::Unipolar:
      segs.emplace_back(v.amplitude_v, v.duration_s);
      break;
    case VoltageMode::BipolarPair:
      segs.emplace_back(v.amplitude_v, 0.5 * v.duration_s);
      segs.emplace_back(-v.amplitude_v, 0.5 * v.duration_s);
      break;
    case VoltageMode::SquareWave: {
      const double half_period = 0.5 / v.square_freq_hz;
      double remaining = v.duration_s;
      double sign = 1.0;
      while (remaining > 0.0) {
        const double seg = std::min(half_period, remaining);
        segs.emplace_back(sign * v.amplitude_v, seg);
        remaining -= seg;
        sign = -sign;
      }
      break;
    }
  }
  return segs;
}

// Pure z-rotation by the accumulated phase 2 pi Int detuning(E(t)) dt,
// evaluated exactly on the piecewise-constant waveform. The donor's full
// detuning (Stark + magnetic) applies while the event plays out.
inline QubitState propagate_voltage(const QubitState& state,
                                    const VoltageEvent& v,
                                    const ExperimentContext& ctx,
                                    const DonorInstance& donor) {
  // The quadratic, linear and magnetic parts accumulate separately so that
  // polarity reversal cancels the linear term bit-exactly.
  double quad_cycles = 0.0, lin_cycles = 0.0, elapsed = 0.0;
  for (const auto& [volts_signed, seg_s] : voltage_segments(v)) {
    const double e_local = donor.field_scale * ctx.efield(volts_signed);
    quad_cycles += ctx.quad_coeff * (e_local * e_local) * seg_s;
    lin_cycles += donor.linear_stark_hz_per_field * e_local * seg_s;
    elapsed += seg_s;
  }
  const double phase_cycles =
      quad_cycles + lin_cycles + donor.magnetic_detuning_hz * elapsed;
  const double angle = kTwoPi * phase_cycles;
  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd u;
  u << std::exp(-i * (0.5 * angle)), 0, 0, std::exp(i * (0.5 * angle));
  QubitState out;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

// Co-evolution of a resonant drive with a voltage waveform: on each
// constant-voltage segment the drive sees the detuning of that segment.
// extra_detuning_hz carries any frame offset (e.g. RF frequency minus the
// nominal transition frequency, negated). If the drive outlasts the
// waveform, the remainder evolves at zero field; if it is shorter, the
// waveform is truncated.
inline QubitState propagate_rf_under_voltage(const QubitState& state,
                                             double f1_hz, double phase_rad,
                                             double tau_s,
                                             const VoltageEvent& v,
                                             const ExperimentContext& ctx,
                                             const DonorInstance& donor,
                                             double extra_detuning_hz = 0.0) {
  if (tau_s < 0) throw std::domain_error("pulse duration must be >= 0");
  QubitState out = state;
  double remaining = tau_s;
  for (const auto& [volts_signed, seg_s] : voltage_segments(v)) {
    if (remaining <= 0.0) break;
    const double dt = std::min(seg_s, remaining);
    out = propagate_pulse(
        out, ctx.stark_detuning(ctx.efield(volts_signed), donor) + extra_detuning_hz,
        f1_hz, phase_rad, dt);
    remaining -= dt;
  }
  if (remaining > 0.0) {
    out = propagate_pulse(out,
                          ctx.stark_detuning(0.0, donor) + extra_detuning_hz,
                          f1_hz, phase_rad, remaining);
  }
  return out;
}

// Phenomenological decoherence: coherences scaled by e^{-tau/T2},
// populations untouched.
inline QubitState apply_decoherence(const QubitState& state, double tau_s,
                                    double t2_s) {
  if (tau_s < 0) throw std::domain_error("duration must be >= 0");
  if (!(t2_s > 0)) throw std::domain_error("T2 must be positive or infinite");
  if (tau_s == 0.0 || std::isinf(t2_s)) return state;
  const double f = std::exp(-tau_s / t2_s);
  QubitState out = state;
  out.rho(0, 1) *= f;
  out.rho(1, 0) *= f;
  return out;
}

}  // namespace starksim
