#pragma once

namespace starksim {

// CODATA 2018 values, SI units.
inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kBohrMagnetonJPerT = 9.2740100783e-24;

// Bohr magneton over Planck constant, Hz per tesla.
inline constexpr double kMuBOverH = kBohrMagnetonJPerT / kPlanckJs;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace starksim
