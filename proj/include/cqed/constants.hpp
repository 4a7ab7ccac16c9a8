#pragma once

#include <numbers>

namespace cqed {

#ifdef CQED_VERSION
inline constexpr const char* version = CQED_VERSION;
#else
inline constexpr const char* version = "0.1.0";
#endif

namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 (exact in the revised SI).
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / two_pi;               // J s
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb

inline constexpr double hz_per_mhz = 1.0e6;

}  // namespace constants

/// Linear frequency in MHz to angular frequency in rad/us.
constexpr double angular(double mhz) { return constants::two_pi * mhz; }

}  // namespace cqed
