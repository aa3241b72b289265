// units.hpp — internal unit system and the conversions used at I/O boundaries.
//
// Energies are in E_J, angular frequencies in E_J/ħ, currents in I₀ = 2πE_J/Φ₀.
// Physical units (GHz, MHz, kelvin) appear only where values enter or leave.
#pragma once

#include <numbers>

namespace sfqc::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// k_B/h in GHz per kelvin (CODATA ratio). The only place this constant lives.
inline constexpr double kB_over_h_GHz_per_K = 20.836619;

inline constexpr double default_ej_GHz = 144.0;

// E_J/ħ in rad/s for a given E_J/h in GHz.
inline double ej_scale_from_GHz(double ej_GHz) { return two_pi * ej_GHz * 1e9; }
inline double ej_GHz_from_scale(double ej_scale) { return ej_scale / (two_pi * 1e9); }

// Angular frequency ω = 2π·ν with ν in MHz / GHz, expressed in E_J/ħ.
inline double from_MHz(double mhz, double ej_scale) { return two_pi * mhz * 1e6 / ej_scale; }
inline double from_GHz(double ghz, double ej_scale) { return two_pi * ghz * 1e9 / ej_scale; }
inline double to_MHz(double w, double ej_scale) { return w * ej_scale / (two_pi * 1e6); }
inline double to_GHz(double w, double ej_scale) { return w * ej_scale / (two_pi * 1e9); }

// Thermal angular frequency k_B T/ħ in E_J/ħ.
inline double thermal_omega(double kelvin, double ej_scale) {
    return two_pi * kB_over_h_GHz_per_K * 1e9 * kelvin / ej_scale;
}

// Susceptibility: internal unit I₀²/(E_J/ħ) → I₀²/(2π·GHz).
inline double chi_to_per_GHz(double chi, double ej_scale) { return chi * two_pi * 1e9 / ej_scale; }

} // namespace sfqc::units
