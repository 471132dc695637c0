#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "starksim/constants.hpp"
#include "starksim/rng.hpp"
#include "starksim/spin_core.hpp"

namespace starksim {

// One ensemble member's local offsets.
struct DonorInstance {
  double magnetic_detuning_hz = 0.0;    // additive offset on the addressed line
  double field_scale = 1.0;             // local E = field_scale * E_applied
  double linear_stark_hz_per_field = 0.0;  // Hz per (V/um), signed
};

// Ensemble widths. The local field scale follows a Lorentzian centered at 1,
// truncated to (0, 4]; magnetic detuning and the linear Stark coefficient are
// Gaussian.
struct EnsembleDistribution {
  double magnetic_fwhm_hz = 0.0;
  double field_scale_fwhm = 0.0;        // dimensionless
  double linear_stark_sigma = 0.0;      // Hz per (V/um)

  void validate() const {
    if (magnetic_fwhm_hz < 0 || field_scale_fwhm < 0 || linear_stark_sigma < 0) {
      throw std::domain_error("distribution widths must be >= 0");
    }
  }
};

// Coefficient C such that the quadratic Stark shift is C * E^2:
// C = (eta_A A) df/dA + (eta_g g_e) df/dg_e.
inline double quadratic_shift_coefficient(const SpinSystem& sys,
                                          double b0_tesla,
                                          const TransitionLabel& t) {
  const Sensitivities s = transition_sensitivities(sys, b0_tesla, t);
  return sys.stark_eta_a * sys.hyperfine_hz * s.df_da +
         sys.stark_eta_g * sys.electron_g * s.df_dg_hz;
}

// Quadratic Stark shift of the labeled transition at field E (V/um).
inline double quadratic_shift(const SpinSystem& sys, double b0_tesla,
                              const TransitionLabel& t, double e_v_per_um) {
  return quadratic_shift_coefficient(sys, b0_tesla, t) *
         (e_v_per_um * e_v_per_um);
}

// Total detuning of the addressed transition for one donor at applied field
// E: quadratic shift at the local field, plus the donor's linear Stark
// component, plus its static magnetic detuning.
inline double total_shift(const SpinSystem& sys, double b0_tesla,
                          const TransitionLabel& t, double e_v_per_um,
                          const DonorInstance& donor) {
  const double e_local = donor.field_scale * e_v_per_um;
  return quadratic_shift(sys, b0_tesla, t, e_local) +
         donor.linear_stark_hz_per_field * e_local +
         donor.magnetic_detuning_hz;
}

namespace detail {

// Inverse CDF of a Cauchy centered at 1 with half-width gamma, restricted to
// (0, 4]. Untruncated Cauchy has undefined moments and produces unphysical
// field reversals.
inline double truncated_cauchy(double u_open01, double gamma) {
  if (gamma == 0.0) return 1.0;
  const double lo = 0.5 + std::atan(-1.0 / gamma) / kPi;  // F(0)
  const double hi = 0.5 + std::atan(3.0 / gamma) / kPi;   // F(4)
  const double u = lo + u_open01 * (hi - lo);
  return 1.0 + gamma * std::tan(kPi * (u - 0.5));
}

}  // namespace detail

// Deterministic function of (seed, index). Draw order is fixed: magnetic
// detuning, linear Stark coefficient, field scale.
inline DonorInstance sample_donor(const EnsembleDistribution& dist,
                                  std::uint64_t seed, std::uint64_t index) {
  dist.validate();
  CounterRng rng(seed, index);
  constexpr double kFwhmToSigma = 1.0 / 2.3548200450309493;  // 1/(2 sqrt(2 ln 2))

  DonorInstance d;
  const double n1 = rng.next_normal();
  const double n2 = rng.next_normal();
  const double u = rng.next_open01();
  d.magnetic_detuning_hz = dist.magnetic_fwhm_hz * kFwhmToSigma * n1;
  d.linear_stark_hz_per_field = dist.linear_stark_sigma * n2;
  d.field_scale = detail::truncated_cauchy(u, 0.5 * dist.field_scale_fwhm);
  return d;
}

// Ensemble of donors, indexed 0..count-1 under one master seed.
struct Ensemble {
  std::vector<DonorInstance> donors;

  static Ensemble sample(const EnsembleDistribution& dist, std::uint64_t seed,
                         int count) {
    Ensemble e;
    e.donors.reserve(count);
    for (int i = 0; i < count; ++i) {
      e.donors.push_back(sample_donor(dist, seed, static_cast<std::uint64_t>(i)));
    }
    return e;
  }

  static Ensemble single_nominal() {
    Ensemble e;
    e.donors.push_back(DonorInstance{});
    return e;
  }

  int size() const { return static_cast<int>(donors.size()); }
};

}  // namespace starksim
