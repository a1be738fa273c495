#pragma once

// CODATA 2018 values. Single authoritative table; nothing in the library
// may redefine these.
namespace spinmech::constants {

inline constexpr double hbar = 1.054571817e-34;        // J s (exact, derived from h)
inline constexpr double speed_of_light = 299792458.0;  // m/s (exact)
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K (exact)

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Conversion helpers. Internally everything is an angular frequency in
// rad/s; user-facing I/O prefers "2pi * X Hz" forms.
inline constexpr double from_2pi_hz(double f_hz) { return two_pi * f_hz; }
inline constexpr double to_2pi_hz(double omega_rad_s) { return omega_rad_s / two_pi; }

}  // namespace spinmech::constants
