#pragma once

#include <stdexcept>
#include <string>

#include "starksim/half_integer.hpp"

namespace starksim {

// Static physical parameters of one donor species. All frequencies in Hz,
// fields in tesla, Stark sensitivities in um^2/V^2.
struct SpinSystem {
  HalfInt nuclear_spin;            // I
  double hyperfine_hz = 0.0;       // A, contact hyperfine
  double electron_g = 2.0;         // g_e
  double gamma_n_hz_per_t = 0.0;   // nuclear gyromagnetic ratio, signed
  double stark_eta_a = 0.0;        // eta_A
  double stark_eta_g = 0.0;        // eta_g

  // Hilbert space dimension 2(2I+1).
  int dim() const { return 2 * (nuclear_spin.twice() + 1); }

  void validate() const {
    if (nuclear_spin.twice() < 1) {
      throw std::domain_error("nuclear spin must be a positive half-integer");
    }
    if (hyperfine_hz < 0.0) {
      throw std::domain_error("hyperfine coupling must be >= 0");
    }
    if (!std::isfinite(hyperfine_hz) || !std::isfinite(electron_g) ||
        !std::isfinite(gamma_n_hz_per_t) || !std::isfinite(stark_eta_a) ||
        !std::isfinite(stark_eta_g)) {
      throw std::domain_error("spin system parameters must be finite");
    }
  }
};

enum class TransitionKind { Esr, Nmr };

// Labels one allowed transition between adjacent eigenlevels, identified in
// the high-field product basis |m_S, m_I>.
//   ESR: (m_S=-1/2, m_I) <-> (m_S=+1/2, m_I), spectator m_I.
//   NMR: (m_S, m_I) <-> (m_S, m_I - 1), spectator m_S, labeled by the upper
//        m_I of the pair.
struct TransitionLabel {
  TransitionKind kind = TransitionKind::Esr;
  HalfInt spectator;      // ESR: m_I, NMR: m_S
  HalfInt nuclear_upper;  // NMR only

  static TransitionLabel esr(HalfInt m_i) {
    TransitionLabel t;
    t.kind = TransitionKind::Esr;
    t.spectator = m_i;
    return t;
  }

  static TransitionLabel nmr(HalfInt m_s, HalfInt upper_m_i) {
    TransitionLabel t;
    t.kind = TransitionKind::Nmr;
    t.spectator = m_s;
    t.nuclear_upper = upper_m_i;
    return t;
  }

  std::string str() const {
    if (kind == TransitionKind::Esr) return "esr " + spectator.str();
    return "nmr " + spectator.str() + " " + nuclear_upper.str();
  }

  friend bool operator==(const TransitionLabel& a, const TransitionLabel& b) {
    if (a.kind != b.kind || a.spectator != b.spectator) return false;
    return a.kind == TransitionKind::Esr || a.nuclear_upper == b.nuclear_upper;
  }

  // Validity against a given system: projections in range, selection rules.
  void validate(const SpinSystem& sys) const {
    const int ti = sys.nuclear_spin.twice();
    if (kind == TransitionKind::Esr) {
      if (std::abs(spectator.twice()) > ti || (spectator.twice() - ti) % 2 != 0) {
        throw std::domain_error("ESR spectator m_I out of range: " +
                                spectator.str());
      }
    } else {
      if (std::abs(spectator.twice()) != 1) {
        throw std::domain_error("NMR spectator m_S must be +-1/2");
      }
      const int up = nuclear_upper.twice();
      if (up > ti || up - 2 < -ti || (up - ti) % 2 != 0) {
        throw std::domain_error("NMR pair out of range: upper m_I = " +
                                nuclear_upper.str());
      }
    }
  }
};

}  // namespace starksim
