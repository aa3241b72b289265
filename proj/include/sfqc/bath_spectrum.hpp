// bath_spectrum.hpp — Ohmic environment: χ''(ω), S(ω) and ℜ(ω) = χ''(ω)[1 + coth(ħω/2k_BT)].
//
// χ''(ω) = η ω e^{−|ω|/ω_c} with η = 2πβ/I_s², i.e. β = η I_s²/2π.
// All frequencies are in E_J/ħ; χ'' carries units of frequency/I₀².
#pragma once

#include <sfqc/units.hpp>

#include <cmath>
#include <stdexcept>

namespace sfqc {

struct BathParams {
    double beta = 1e-4;
    double omega_c = 1.0;    // E_J/ħ
    double i_s = 1.0;        // I₀
    double temperature = 0.0; // kelvin
    double ej_scale = units::ej_scale_from_GHz(units::default_ej_GHz);

    void validate() const {
        if (!(beta > 0.0)) throw std::invalid_argument("bath beta must be positive");
        if (!(omega_c > 0.0)) throw std::invalid_argument("bath cutoff must be positive");
        if (!(i_s > 0.0)) throw std::invalid_argument("bath normalisation current must be positive");
        if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
        if (!(ej_scale > 0.0)) throw std::invalid_argument("ej_scale must be positive");
    }
    double eta() const { return units::two_pi * beta / (i_s * i_s); }
    double thermal() const { return units::thermal_omega(temperature, ej_scale); } // k_B T/ħ
};

// Templated on the floating type so the rate coefficients can be formed in extended precision.
template <class Real>
Real chi_imag(Real w, const BathParams& b) {
    return Real(b.eta()) * w * std::exp(-std::abs(w) / Real(b.omega_c));
}

// S(ω) = χ''(ω) coth(ω/2ω_T); S(0) = 2η ω_T; S = |χ''| at T = 0.
template <class Real>
Real spectral_density(Real w, const BathParams& b) {
    if (b.temperature == 0.0) return std::abs(chi_imag(w, b));
    const Real wt = b.thermal();
    if (w == Real(0)) return 2 * Real(b.eta()) * wt;
    return chi_imag(w, b) / std::tanh(w / (2 * wt));
}

// 1 + coth(x) = −2/expm1(−2x), free of cancellation for x < 0.
// ℜ(0) = S(0); at T = 0 ℜ is 2χ'' for ω > 0 and vanishes otherwise.
template <class Real>
Real r_function(Real w, const BathParams& b) {
    if (b.temperature == 0.0) return w > Real(0) ? 2 * chi_imag(w, b) : Real(0);
    const Real wt = b.thermal();
    if (w == Real(0)) return 2 * Real(b.eta()) * wt;
    return chi_imag(w, b) * (-2 / std::expm1(-w / wt));
}

} // namespace sfqc
