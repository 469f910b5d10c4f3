#pragma once

namespace oml::constants {

// 2019 SI exact / CODATA values.
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double planck_h = 6.62607015e-34;           // J s
inline constexpr double speed_of_light = 299792458.0;        // m / s
inline constexpr double atomic_mass_unit = 1.66053906892e-27; // kg

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline constexpr double sodium23_mass = 22.98976928 * atomic_mass_unit; // kg

} // namespace oml::constants
