// linear_response.hpp — probe susceptibility χ_q = χ₀₁ + χ₀₂, its two-resonance
// decomposition, and the coherence Green functions.
//
// Units: χ in I₀²/(E_J/ħ) (ħ = 1 internally), detunings in E_J/ħ.
// Only the co-rotating (ω > 0) branch is modelled.
#pragma once

#include <sfqc/dressed_rates.hpp>

#include <algorithm>
#include <complex>
#include <tuple>

namespace sfqc {

// D₁(δ) = −(δ + iγ11)(δ − Δ + iγ22) + (iγ12 − Ω_D)(iγ21 − Ω_D*).
inline cplx d1(cplx delta, const DampingRates& r, const DriveConfig& drive) {
    const cplx i(0.0, 1.0);
    const cplx od = drive.omega_d();
    return -(delta + i * r.g11) * (delta - drive.delta + i * r.g22) + (i * r.g12 - od) * (i * r.g21 - std::conj(od));
}

inline cplx chi01(double delta1, const DampingRates& r, const DriveConfig& drive, double i01_abs) {
    const cplx i(0.0, 1.0);
    return i01_abs * i01_abs * (delta1 - drive.delta + i * r.g22) / d1(delta1, r, drive);
}

inline cplx chi02(double delta2, const DampingRates& r, const DriveConfig& drive, double i02_abs) {
    const cplx i(0.0, 1.0);
    return i02_abs * i02_abs * (delta2 + i * r.g11) / d1(delta2, r, drive);
}

// Inputs for frequency-domain (and time-domain) response at one operating point.
struct ResponseContext {
    TransitionFrequencies freqs;
    double i01_abs = 0.0, i02_abs = 0.0;
    DampingRates rates;
    DriveConfig drive;

    double omega_prime() const { return freqs.omega2 - drive.delta; } // ω′ = ω₀ + ω₁
};

inline ResponseContext make_context(const OperatingPoint& op, std::vector<std::string>* warnings = nullptr) {
    const auto dev = analyze_device(op.circuit, op.trunc);
    ResponseContext ctx;
    ctx.freqs = dev.freqs;
    ctx.i01_abs = std::abs(dev.currents(0, 1));
    ctx.i02_abs = std::abs(dev.currents(0, 2));
    ctx.drive = op.drive;
    ctx.rates = damping_rates(dev.currents, dev.freqs, op.drive, make_bath(op), warnings);
    return ctx;
}

struct ResponsePoint {
    double omega_p = 0.0;
    double delta1 = 0.0; // ω_P − ω₁
    double delta2 = 0.0; // ω_P − ω′
    cplx chi01, chi02, chi_q;
    bool extrapolated = false; // negative ω_P, answered by χ(−ω) = χ(ω)*
};

inline ResponsePoint chi_q(double omega_p, const ResponseContext& ctx) {
    ResponsePoint p;
    const double w = std::abs(omega_p);
    p.omega_p = omega_p;
    p.delta1 = w - ctx.freqs.omega1;
    p.delta2 = w - ctx.omega_prime();
    p.chi01 = chi01(p.delta1, ctx.rates, ctx.drive, ctx.i01_abs);
    p.chi02 = chi02(p.delta2, ctx.rates, ctx.drive, ctx.i02_abs);
    if (omega_p < 0.0) {
        p.extrapolated = true;
        p.chi01 = std::conj(p.chi01);
        p.chi02 = std::conj(p.chi02);
    }
    p.chi_q = p.chi01 + p.chi02;
    return p;
}

enum class Window { w01, w02 };
enum class RootSplitting { real_split, imaginary_split };

// χ(δ) = R₊(δ) + R₋(δ), R±(δ) = residue±/(δ − δ±). δ₊ is the root with the larger real
// part; real parts equal within 1e-12·scale fall back to the larger imaginary part.
struct ResonancePair {
    Window window = Window::w01;
    cplx delta_plus, delta_minus;
    cplx residue_plus, residue_minus;
    RootSplitting tag = RootSplitting::real_split;
    double scale = 0.0;

    cplx r_plus(double delta) const { return residue_plus / (delta - delta_plus); }
    cplx r_minus(double delta) const { return residue_minus / (delta - delta_minus); }
    cplx evaluate(double delta) const { return r_plus(delta) + r_minus(delta); }
};

inline double response_scale(const DampingRates& r, const DriveConfig& drive) {
    return std::abs(r.g11) + std::abs(r.g22) + std::abs(r.g12) + std::abs(r.g21) + drive.omega_d_mag +
           std::abs(drive.delta);
}

// Roots of D₁(δ) = 0, ordered (δ₊, δ₋).
inline std::pair<cplx, cplx> d1_roots(const DampingRates& r, const DriveConfig& drive) {
    const cplx i(0.0, 1.0);
    const cplx od = drive.omega_d();
    // (δ + iγ11)(δ − Δ + iγ22) − K = 0  ⇒  δ² + bδ + c = 0
    const cplx K = (i * r.g12 - od) * (i * r.g21 - std::conj(od));
    const cplx b = i * (r.g11 + r.g22) - drive.delta;
    const cplx c = i * r.g11 * (i * r.g22 - drive.delta) - K;
    cplx sq = std::sqrt(b * b - 4.0 * c);
    if ((std::conj(b) * sq).real() < 0.0) sq = -sq;
    const cplx q = -0.5 * (b + sq);
    cplx x1 = q, x2 = (q == cplx(0.0)) ? cplx(0.0) : c / q;
    if (q == cplx(0.0)) x1 = x2 = -0.5 * b;
    const double tol = 1e-12 * std::max(response_scale(r, drive), 1e-300);
    const bool swap = std::abs(x1.real() - x2.real()) > tol ? x2.real() > x1.real() : x2.imag() > x1.imag();
    if (swap) std::swap(x1, x2);
    return {x1, x2};
}

inline ResonancePair decompose(Window which, const DampingRates& r, const DriveConfig& drive, double i0i_abs = 1.0) {
    const cplx i(0.0, 1.0);
    ResonancePair p;
    p.window = which;
    p.scale = response_scale(r, drive);
    std::tie(p.delta_plus, p.delta_minus) = d1_roots(r, drive);
    const cplx gap = p.delta_plus - p.delta_minus;
    if (!(std::abs(gap) >= 1e-12 * p.scale))
        throw BifurcationError("degenerate resonances: two-resonance decomposition is invalid at this point");
    p.tag = std::abs(gap.real()) >= std::abs(gap.imag()) ? RootSplitting::real_split : RootSplitting::imaginary_split;
    const double a = i0i_abs * i0i_abs;
    auto numerator = [&](cplx d) {
        return which == Window::w01 ? d - drive.delta + i * r.g22 : d + i * r.g11;
    };
    p.residue_plus = a * numerator(p.delta_plus) / (p.delta_minus - p.delta_plus);
    p.residue_minus = a * numerator(p.delta_minus) / (p.delta_plus - p.delta_minus);
    return p;
}

struct GreenFunctions {
    cplx g11, g12, g21, g22;
};

// Γ_lm → iγ_lm in the printed forms; D(ω) is the same quadratic as D₁.
inline GreenFunctions green_functions(cplx omega, const DampingRates& r, const DriveConfig& drive) {
    const cplx i(0.0, 1.0);
    const cplx od = drive.omega_d();
    const cplx D = d1(omega, r, drive);
    return {i * (omega + i * r.g11) / D, i * (i * r.g12 - od) / D, i * (i * r.g21 - std::conj(od)) / D,
            i * (omega - drive.delta + i * r.g22) / D};
}

} // namespace sfqc
