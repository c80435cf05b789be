#pragma once

// Dimensionless unit system used throughout the library.
//
//   hbar = m = d = 1
//
// Momenta are wavenumbers k (so k*d is just k), energies are E = k^2/2, and
// kernel values V(x,y) are stored in these same units. The natural kernel
// scale for plotting, V0 = hbar^2/(2 m d^3), is therefore 1/2; use
// `to_v0_units` when a figure axis wants V/V0.

namespace nhscat::units {

inline constexpr double hbar = 1.0;
inline constexpr double mass = 1.0;
inline constexpr double length = 1.0;

/// Kernel scale hbar^2 / (2 m d^3).
inline constexpr double v0 = hbar * hbar / (2.0 * mass * length * length * length);

constexpr double energy(double k) { return hbar * hbar * k * k / (2.0 * mass); }

constexpr double to_v0_units(double v) { return v / v0; }
constexpr double from_v0_units(double v) { return v * v0; }

}  // namespace nhscat::units
