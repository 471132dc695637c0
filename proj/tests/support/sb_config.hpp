#pragma once

#include "starksim/pulse_engine.hpp"
#include "starksim/spin_system.hpp"

namespace testcfg {

// 121Sb donor in 28Si. A, g_e and gamma_n are literature values; the Stark
// sensitivities eta_A and eta_g are the measured ones for this system.
inline starksim::SpinSystem sb121() {
  starksim::SpinSystem s;
  s.nuclear_spin = starksim::half(5);     // I = 5/2
  s.hyperfine_hz = 186.8e6;
  s.electron_g = 1.9986;
  s.gamma_n_hz_per_t = 10.2555e6;
  s.stark_eta_a = -3.54e-3;               // um^2/V^2
  s.stark_eta_g = 5.3e-6;                 // um^2/V^2
  return s;
}

inline constexpr double kB0Tesla = 0.3635;       // X-band working point
inline constexpr double kThicknessMm = 1.71;
inline constexpr double kPlateVolts = 150.0;

inline starksim::TransitionLabel esr_line() {
  return starksim::TransitionLabel::esr(starksim::half(-5));  // m_I = -5/2
}

// m_S = +1/2 nuclear line, m_I = +1/2 <-> -1/2 pair
inline starksim::TransitionLabel nmr_line() {
  return starksim::TransitionLabel::nmr(starksim::half(1), starksim::half(1));
}

inline starksim::ExperimentContext nmr_context(
    double t2_nmr = starksim::kInfiniteT2) {
  return starksim::ExperimentContext::create(sb121(), kB0Tesla, nmr_line(),
                                             kThicknessMm,
                                             starksim::kInfiniteT2, t2_nmr);
}

inline starksim::ExperimentContext esr_context(
    double t2_esr = starksim::kInfiniteT2) {
  return starksim::ExperimentContext::create(sb121(), kB0Tesla, esr_line(),
                                             kThicknessMm, t2_esr);
}

}  // namespace testcfg
