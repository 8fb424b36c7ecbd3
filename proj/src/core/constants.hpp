#pragma once

#include <numbers>

namespace rp {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI constants and the default atom (85Rb driven on the D2 line).
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K (exact)
inline constexpr double rb85_mass = 1.40999e-25;       // kg
inline constexpr double d2_wavelength = 780.241e-9;    // m

}  // namespace rp
