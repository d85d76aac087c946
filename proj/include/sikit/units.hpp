#pragma once

#include <cmath>

// Unit conventions used throughout: lengths in mm (mil accepted at interfaces),
// frequencies in Hz, impedances in ohm, times in ps, capacitance fF, inductance pH.

namespace sikit {

// Speed of light. The mm/ps form is the one that matters for delay math:
// tau = L * sqrt(dk) / c_mm_per_ps gives ps directly.
inline constexpr double c_mm_per_s  = 2.99792458e11;
inline constexpr double c_mm_per_ps = 0.299792458;

inline constexpr double mm_per_mil  = 0.0254;   // exact
inline constexpr double mm_per_inch = 25.4;     // exact

inline constexpr double mil_to_mm(double mil) { return mil * mm_per_mil; }
inline constexpr double mm_to_mil(double mm)  { return mm / mm_per_mil; }
inline constexpr double inch_to_mm(double in) { return in * mm_per_inch; }

// dB <-> linear magnitude (20log10 convention, field quantities).
inline double db_from_mag(double mag) { return 20.0 * std::log10(mag); }
inline double mag_from_db(double db)  { return std::pow(10.0, db / 20.0); }

// Nepers per mm from dB per mm. 1 Np = 20/ln(10) dB.
inline constexpr double db_per_neper = 8.685889638065035;

inline constexpr double pi = 3.141592653589793;

} // namespace sikit
