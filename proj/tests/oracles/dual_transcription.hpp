// dual_transcription.hpp — second, independent encoding of the relaxation coefficients.
//
// Written from the complex forms Γ_lm = Σ weight·A/B with bracketed terms
// [χ(x) ± 2iS̃(x)], χ = χ′ + iχ″ and S̃ = (S + iS′)/2, then γ_lm = Im Γ_lm. The real parts
// χ′, S′ (principal-value integrals, never modelled) are supplied by the caller; any
// finite values must leave γ unchanged. Mixing angle from the tangent form, bath
// functions re-derived here (coth written as cosh/sinh), no shared code with the library.
// Evaluated in long double: the cross rates are cancellation-prone differences, and the
// comparison must resolve them well below double rounding.
#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using real = long double;
using cx = std::complex<real>;

struct OhmicBath {
    double eta = 0.0;     // χ″(ω) = η ω e^{−|ω|/ω_c}
    double omega_c = 0.0;
    double thermal = 0.0; // k_B T/ħ, same units as ω

    real chi2(real w) const { return eta * w * std::exp(-std::abs(w) / omega_c); }
    real S(real w) const {
        if (thermal == 0.0) return std::abs(chi2(w));
        if (w == 0) return 2 * real(eta) * thermal;
        const real x = w / (2 * real(thermal));
        if (x > 350.0) return chi2(w);
        if (x < -350.0) return -chi2(w);
        return chi2(w) * std::cosh(x) / std::sinh(x);
    }
};

struct Point {
    double w1 = 0, w2 = 0, w3 = 0;    // transition frequencies
    double rabi = 0, delta = 0;       // |Ω_D|, Δ
    double nu = 1;                    // ±1
    double i01 = 0, i02 = 0, i12 = 0; // moduli
    double i00 = 0, i11 = 0, i22 = 0;
};

struct Gammas {
    double g11, g22, g12, g21;
};

// chi_re, s_re: arbitrary real-part models (Lamb-shift integrals), must not matter.
inline Gammas complex_form_rates(const Point& p, const OhmicBath& bath,
                                 const std::function<double(double)>& chi_re,
                                 const std::function<double(double)>& s_re) {
    const cx i(0, 1);
    const real Om = std::sqrt(real(p.delta) * p.delta + 4 * real(p.rabi) * p.rabi);
    const real th = Om == 0 ? real(0) : std::atan(std::sqrt((Om - p.delta) / (Om + p.delta)));
    const real sn = std::sin(th), cs = std::cos(th);
    const real sn2t = std::sin(2 * th), cs2t = std::cos(2 * th);
    const real w0 = real(p.w3) - p.delta, wp = w0 + p.w1;
    const real w0p = w0 + Om, w0m = w0 - Om;
    const real w1p = p.w1 + (p.delta + Om) / 2, w1m = p.w1 + (p.delta - Om) / 2;
    const real wpp = wp + (p.delta + Om) / 2, wpm = wp + (p.delta - Om) / 2;

    auto chi = [&](real x) { return cx(chi_re(double(x)), bath.chi2(x)); };
    auto St = [&](real x) { return cx(bath.S(x), s_re(double(x))) / real(2); };
    auto plus = [&](real x) { return chi(x) + real(2) * i * St(x); };
    auto minus = [&](real x) { return chi(x) - real(2) * i * St(x); };
    const cx nu(p.nu, 0.0), nus = std::conj(nu);

    const cx A11 = real(2) * i * sn * sn * St(w1p) + real(2) * i * cs * cs * St(w1m);
    const cx A12 = -cs * cs / 2 * minus(wpp) - sn * sn / 2 * minus(wpm);
    const cx A13 = std::pow(cs, 4) / 2 * plus(-w0p) + std::pow(sn, 4) / 2 * plus(-w0m) + sn2t * sn2t / 4 * plus(-w0);
    const cx A14 = -minus(0) / real(2);
    const cx A15 = -sn2t * sn2t / 8 * plus(Om) - sn2t * sn2t / 8 * plus(-Om) - (1 + cs2t * cs2t) / 4 * plus(0);
    const cx A16 = sn2t * sn2t / 8 * plus(Om) + sn2t * sn2t / 8 * plus(-Om) - sn2t * sn2t / 4 * plus(0);

    const cx A21 = nu * sn2t / real(4) * plus(w1p) - nu * sn2t / real(4) * plus(w1m);
    const cx A22 = -nu * sn2t * cs * cs / real(4) * plus(-w0p) + nu * sn2t * sn * sn / real(4) * plus(-w0m) +
                   nu * sn2t * cs2t / real(4) * plus(-w0);
    const cx A23 = -nu * sn2t * cs * cs / real(4) * plus(Om) + nu * sn2t * sn * sn / real(4) * plus(-Om) +
                   nu * sn2t * cs2t / real(4) * plus(0);
    const cx A24 = nu * sn2t * cs * cs / real(4) * plus(Om) - nu * sn2t * sn * sn / real(4) * plus(-Om) -
                   nu * sn2t * cs2t / real(4) * plus(0);

    const cx B11 = nus * sn2t / real(4) * plus(wpp) - nus * sn2t / real(4) * plus(wpm);
    const cx B12 = nus * sn2t * cs * cs / real(4) * plus(w0p) - nus * sn2t * sn * sn / real(4) * plus(w0m) -
                   nus * sn2t * cs2t / real(4) * plus(w0);
    const cx B13 = nus * sn2t * sn * sn / real(4) * plus(Om) - nus * sn2t * cs * cs / real(4) * plus(-Om) +
                   nus * sn2t * cs2t / real(4) * plus(0);
    const cx B14 = -nus * sn2t * sn * sn / real(4) * plus(Om) + nus * sn2t * cs * cs / real(4) * plus(-Om) -
                   nus * sn2t * cs2t / real(4) * plus(0);

    const cx B21 = -sn * sn / 2 * minus(w1p) - cs * cs / 2 * minus(w1m);
    const cx B22 = real(2) * i * cs * cs * St(wpp) + real(2) * i * sn * sn * St(wpm);
    const cx B23 = std::pow(cs, 4) / 2 * plus(w0p) + std::pow(sn, 4) / 2 * plus(w0m) + sn2t * sn2t / 4 * plus(w0);
    const cx B24 = -minus(0) / real(2);
    const cx B25 = sn2t * sn2t / 8 * plus(Om) + sn2t * sn2t / 8 * plus(-Om) - sn2t * sn2t / 4 * plus(0);
    const cx B26 = -sn2t * sn2t / 8 * plus(Om) - sn2t * sn2t / 8 * plus(-Om) - (1 + cs2t * cs2t) / 4 * plus(0);

    const real a01 = real(p.i01) * p.i01, a02 = real(p.i02) * p.i02, a12 = real(p.i12) * p.i12;
    const real d1 = real(p.i00) - p.i11, d2 = real(p.i00) - p.i22;
    const cx G11 = a01 * A11 + a02 * A12 + a12 * A13 + d1 * p.i00 * A14 + d1 * p.i11 * A15 + d1 * p.i22 * A16;
    const cx G12 = a01 * A21 + a12 * A22 + d1 * p.i11 * A23 + d1 * p.i22 * A24;
    const cx G21 = a02 * B11 + a12 * B12 + d2 * p.i11 * B13 + d2 * p.i22 * B14;
    const cx G22 = a01 * B21 + a02 * B22 + a12 * B23 + d2 * p.i00 * B24 + d2 * p.i11 * B25 + d2 * p.i22 * B26;
    return {double(G11.imag()), double(G22.imag()), double(G12.imag()), double(G21.imag())};
}

} // namespace oracle
