#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "starksim/ensemble_analysis.hpp"
#include "starksim/errors.hpp"
#include "starksim/parallel.hpp"
#include "starksim/pulse_engine.hpp"
#include "starksim/trace.hpp"

namespace starksim {

// Uhrig spacing t_j = T sin^2(pi j / (2n+2)), j = 1..n, strictly inside
// (0, T). n = 0 is plain free evolution.
inline std::vector<double> udd_times(int n, double total_s) {
  if (n < 0) throw std::domain_error("pulse count must be >= 0");
  if (!(total_s > 0)) throw std::domain_error("total time must be > 0");
  std::vector<double> times;
  times.reserve(n);
  for (int j = 1; j <= n; ++j) {
    const double s = std::sin(kPi * j / (2.0 * n + 2.0));
    times.push_back(total_s * s * s);
  }
  return times;
}

// Davies-convention echo: -1 for an unperturbed nuclear spin, 0 for a fully
// inverted one.
inline double endor_readout(double p_flip) {
  if (!(p_flip >= 0.0 && p_flip <= 1.0)) {
    throw std::domain_error("flip probability outside [0, 1]");
  }
  return p_flip - 1.0;
}

namespace detail {

inline std::vector<std::complex<double>> add_vec(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
  std::vector<std::complex<double>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Ensemble-averaged complex ordinates over a shared abscissa.
inline Trace average_over_donors(
    const std::string& abscissa_name, const std::vector<double>& abscissa,
    const Ensemble& ensemble, bool complex_valued,
    const std::function<void(const DonorInstance&,
                             std::vector<std::complex<double>>&)>& accumulate) {
  using Vec = std::vector<std::complex<double>>;
  const int n = ensemble.size();
  Vec total = ensemble_accumulate<Vec>(
      n, [&] { return Vec(abscissa.size(), std::complex<double>(0, 0)); },
      [&](Vec& acc, int idx) { accumulate(ensemble.donors[idx], acc); },
      add_vec);
  Trace t;
  t.abscissa_name = abscissa_name;
  t.abscissa = abscissa;
  t.complex_valued = complex_valued;
  t.ordinate.resize(abscissa.size());
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    t.ordinate[i] = total[i] / static_cast<double>(n);
  }
  t.donor_count.assign(abscissa.size(), n);
  return t;
}

}  // namespace detail

// Electron-phase Stark spectroscopy under UDD decoupling. The DC field plays
// inside every other inter-pulse interval; with the bipolar flag each window
// holds a +E/-E pair so the linear Stark phase cancels. tau_grid lists the
// total voltage-on duration per point (split evenly over the n/2 windows).
// The returned ordinate is the ensemble-averaged echo phase factor,
// referenced so a positive quadratic shift appears at positive frequency.
inline Trace udd_stark_experiment(const ExperimentContext& ctx,
                                  double e_applied_v_per_um, bool bipolar,
                                  const std::vector<double>& tau_grid,
                                  const Ensemble& ensemble, int n_pulses = 4,
                                  double total_s = 0.0) {
  if (n_pulses < 2 || n_pulses % 2 != 0) {
    throw ScheduleError("voltage windows need an even pulse count >= 2");
  }
  double tau_max = 0.0;
  for (double t : tau_grid) {
    if (t < 0) throw ScheduleError("voltage duration must be >= 0");
    tau_max = std::max(tau_max, t);
  }
  if (total_s <= 0.0) total_s = 2.0 * tau_max;
  const std::vector<double> times = udd_times(n_pulses, total_s);

  // interval lengths between pi pulses (boundaries 0, t_1..t_n, T)
  std::vector<double> lengths;
  lengths.push_back(times.empty() ? total_s : times.front());
  for (std::size_t j = 1; j < times.size(); ++j) {
    lengths.push_back(times[j] - times[j - 1]);
  }
  lengths.push_back(total_s - times.back());

  // voltage windows sit in the odd intervals (between pulse pairs 1-2, 3-4, ...)
  std::vector<int> window_intervals;
  for (int j = 1; j < n_pulses; j += 2) window_intervals.push_back(j);
  const double per_window_max = tau_max / window_intervals.size();
  for (int j : window_intervals) {
    if (per_window_max > lengths[j] * (1.0 + 1e-12)) {
      throw ScheduleError("voltage window exceeds its decoupling interval");
    }
  }

  const double t2 = ctx.t2();
  const double amp = std::isinf(t2) ? 1.0 : std::exp(-total_s / t2);

  return detail::average_over_donors(
      "tau_v_total_s", tau_grid, ensemble, /*complex_valued=*/true,
      [&](const DonorInstance& donor, std::vector<std::complex<double>>& acc) {
        // static magnetic detuning, sign-weighted over all intervals
        double base_cycles = 0.0;
        for (std::size_t j = 0; j < lengths.size(); ++j) {
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          base_cycles += sign * donor.magnetic_detuning_hz * lengths[j];
        }
        const double e_local = donor.field_scale * e_applied_v_per_um;
        const double quad = ctx.quad_coeff * e_local * e_local;
        const double lin = donor.linear_stark_hz_per_field * e_local;
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
          const double per_window = tau_grid[i] / window_intervals.size();
          double stark_cycles = 0.0;
          for (std::size_t w = 0; w < window_intervals.size(); ++w) {
            // window intervals carry sign -1
            if (bipolar) {
              stark_cycles -= quad * per_window;  // +E/-E halves; linear nets zero
            } else {
              stark_cycles -= (quad + lin) * per_window;
            }
          }
          const double phase = kTwoPi * (base_cycles + stark_cycles);
          // conjugate detection: positive shift at positive frequency
          acc[i] += amp * std::exp(std::complex<double>(0, -phase));
        }
      });
}

// 2D nuclear phase-gate map: for each (tau_RF, tau_V) the soft RF rotation is
// split around a refocusing pi, with the bipolar voltage pulse on one side
// and a matching delay on the other, so the static magnetic detuning
// refocuses and the linear Stark phase cancels inside the bipolar pair while
// the quadratic phase survives.
inline Trace2D phase_gate_map(const ExperimentContext& ctx,
                              const std::vector<double>& tau_rf_grid,
                              const std::vector<double>& tau_v_grid,
                              double volts, double f1_hz,
                              const Ensemble& ensemble,
                              double refocus_f1_hz = 30e3) {
  if (tau_rf_grid.empty() || tau_v_grid.empty()) {
    throw ScheduleError("phase-gate grids must be non-empty");
  }
  const double t2 = ctx.t2();
  const double hard_tau = 0.5 / refocus_f1_hz;
  using Vec = std::vector<std::complex<double>>;
  const std::size_t npts = tau_rf_grid.size() * tau_v_grid.size();

  Vec total = ensemble_accumulate<Vec>(
      ensemble.size(), [&] { return Vec(npts, std::complex<double>(0, 0)); },
      [&](Vec& acc, int idx) {
        const DonorInstance& donor = ensemble.donors[idx];
        const double detuning = ctx.stark_detuning(0.0, donor);
        for (std::size_t r = 0; r < tau_rf_grid.size(); ++r) {
          for (std::size_t c = 0; c < tau_v_grid.size(); ++c) {
            const double half_rf = 0.5 * tau_rf_grid[r];
            const double tau_v = tau_v_grid[c];
            QubitState q = QubitState::ground();
            q = propagate_pulse(q, detuning, f1_hz, 0.0, half_rf);
            q = apply_decoherence(q, half_rf, t2);
            VoltageEvent v{volts, tau_v, VoltageMode::BipolarPair, 0.0};
            q = propagate_voltage(q, v, ctx, donor);
            q = apply_decoherence(q, tau_v, t2);
            q = propagate_pulse(q, detuning, refocus_f1_hz, 0.0, hard_tau);
            q = apply_decoherence(q, hard_tau, t2);
            q = propagate_pulse(q, detuning, 0.0, 0.0, tau_v);  // matching delay
            q = apply_decoherence(q, tau_v, t2);
            q = propagate_pulse(q, detuning, f1_hz, 0.0, half_rf);
            q = apply_decoherence(q, half_rf, t2);
            acc[r * tau_v_grid.size() + c] +=
                endor_readout(std::clamp(q.population_excited(), 0.0, 1.0));
          }
        }
      },
      detail::add_vec);

  Trace2D map;
  map.row_name = "tau_rf_s";
  map.col_name = "tau_v_s";
  map.rows = tau_rf_grid;
  map.cols = tau_v_grid;
  map.values.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    map.values[i] = total[i].real() / ensemble.size();
  }
  return map;
}

enum class EndorVoltageMode { None, Unipolar, SquareWave };

// ENDOR line: echo intensity vs RF offset from the nominal transition, with
// the RF pulse optionally co-played with a voltage waveform.
inline Trace endor_spectrum(const ExperimentContext& ctx,
                            const std::vector<double>& f_offset_grid,
                            EndorVoltageMode mode, double volts, double tau_rf,
                            double f1_hz, const Ensemble& ensemble,
                            double square_freq_hz = 8e3) {
  const double t2 = ctx.t2();
  return detail::average_over_donors(
      "f_rf_offset_hz", f_offset_grid, ensemble, /*complex_valued=*/false,
      [&](const DonorInstance& donor, std::vector<std::complex<double>>& acc) {
        for (std::size_t i = 0; i < f_offset_grid.size(); ++i) {
          const double frame = -f_offset_grid[i];
          QubitState q = QubitState::ground();
          if (mode == EndorVoltageMode::None) {
            q = propagate_pulse(q, ctx.stark_detuning(0.0, donor) + frame,
                                f1_hz, 0.0, tau_rf);
          } else {
            VoltageEvent v{volts, tau_rf,
                           mode == EndorVoltageMode::Unipolar
                               ? VoltageMode::Unipolar
                               : VoltageMode::SquareWave,
                           square_freq_hz};
            q = propagate_rf_under_voltage(q, f1_hz, 0.0, tau_rf, v, ctx, donor,
                                           frame);
          }
          q = apply_decoherence(q, tau_rf, t2);
          acc[i] +=
              endor_readout(std::clamp(q.population_excited(), 0.0, 1.0));
        }
      });
}

struct VoltageWindow {
  bool always_on = true;
  double start_s = 0.0;
  double stop_s = 0.0;

  static VoltageWindow always() { return VoltageWindow{}; }
  static VoltageWindow between(double start_s, double stop_s) {
    if (!(0.0 <= start_s && start_s <= stop_s)) {
      throw ScheduleError("voltage window must satisfy 0 <= start <= stop");
    }
    return VoltageWindow{false, start_s, stop_s};
  }
};

// Nuclear Rabi oscillation with a DC detuning voltage applied either for the
// whole drive or inside a window.
inline Trace detuned_rabi(const ExperimentContext& ctx,
                          const std::vector<double>& tau_grid,
                          const VoltageWindow& window, double volts,
                          double f1_hz, const Ensemble& ensemble) {
  const double t2 = ctx.t2();
  double tau_max = 0.0;
  for (double t : tau_grid) tau_max = std::max(tau_max, t);
  if (!window.always_on && window.stop_s > tau_max * (1.0 + 1e-12)) {
    throw ScheduleError("voltage window extends past the longest RF pulse");
  }
  return detail::average_over_donors(
      "tau_rf_s", tau_grid, ensemble, /*complex_valued=*/false,
      [&](const DonorInstance& donor, std::vector<std::complex<double>>& acc) {
        const double base = ctx.stark_detuning(0.0, donor);
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
          const double tau = tau_grid[i];
          QubitState q = QubitState::ground();
          if (window.always_on) {
            VoltageEvent v{volts, tau, VoltageMode::Unipolar, 0.0};
            q = propagate_rf_under_voltage(q, f1_hz, 0.0, tau, v, ctx, donor);
          } else {
            const double t0 = std::min(window.start_s, tau);
            const double t1 = std::min(window.stop_s, tau);
            q = propagate_pulse(q, base, f1_hz, 0.0, t0);
            if (t1 > t0) {
              VoltageEvent v{volts, t1 - t0, VoltageMode::Unipolar, 0.0};
              q = propagate_rf_under_voltage(q, f1_hz, 0.0, t1 - t0, v, ctx,
                                             donor);
            }
            q = propagate_pulse(q, base, f1_hz, 0.0, tau - t1);
          }
          q = apply_decoherence(q, tau, t2);
          acc[i] +=
              endor_readout(std::clamp(q.population_excited(), 0.0, 1.0));
        }
      });
}

// Soft RF rotation interleaved with two broadband refocusing pi pulses in a
// symmetric quarter/half/quarter pattern, all about the same axis. With the
// voltage off the composite is a net pi rotation (for the default soft
// rotation of pi, up to global phase). With the square-wave bipolar voltage
// on during the soft segments, the soft drive is detuned away and the
// accumulated Stark phases refocus across the two pi pulses, leaving
// approximately the identity.
inline QubitState refocused_conditional_gate(
    const ExperimentContext& ctx, const QubitState& input, bool voltage_on,
    double volts, double f1_hz, const Ensemble& ensemble,
    double hard_f1_hz = 30e3, double square_freq_hz = 8e3,
    double soft_rotation_rad = kPi) {
  const double t2 = ctx.t2();
  const double tau_soft = soft_rotation_rad / (kTwoPi * f1_hz);
  const double hard_tau = 0.5 / hard_f1_hz;
  constexpr double kYPhase = 0.5 * kPi;

  using Acc = Eigen::Matrix2cd;
  Acc total = ensemble_accumulate<Acc>(
      ensemble.size(), [] { return Acc(Acc::Zero()); },
      [&](Acc& acc, int idx) {
        const DonorInstance& donor = ensemble.donors[idx];
        const double base = ctx.stark_detuning(0.0, donor);
        auto soft = [&](QubitState q, double seg) {
          if (seg <= 0.0) return q;
          if (voltage_on) {
            VoltageEvent v{volts, seg, VoltageMode::SquareWave, square_freq_hz};
            q = propagate_rf_under_voltage(q, f1_hz, kYPhase, seg, v, ctx,
                                           donor);
          } else {
            q = propagate_pulse(q, base, f1_hz, kYPhase, seg);
          }
          return apply_decoherence(q, seg, t2);
        };
        auto hard_pi = [&](QubitState q) {
          q = propagate_pulse(q, base, hard_f1_hz, kYPhase, hard_tau);
          return apply_decoherence(q, hard_tau, t2);
        };
        QubitState q = input;
        q = soft(q, 0.25 * tau_soft);
        q = hard_pi(q);
        q = soft(q, 0.5 * tau_soft);
        q = hard_pi(q);
        q = soft(q, 0.25 * tau_soft);
        acc += q.rho;
      },
      [](const Acc& a, const Acc& b) -> Acc { return a + b; });

  QubitState out;
  out.rho = total / static_cast<double>(ensemble.size());
  return out;
}

}  // namespace starksim
