// dressed_rates.hpp — dressed-drive parameters (Ω, θ, ν) and the damping rates γ11, γ22, γ12, γ21.
//
// Rates are the imaginary parts of the drive-dependent relaxation coefficients, written
// as real combinations of S(ω) and ℜ(ω). Lamb shifts (real parts) are not modelled.
#pragma once

#include <sfqc/bath_spectrum.hpp>
#include <sfqc/device.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace sfqc {

struct DriveConfig {
    double omega_d_mag = 0.0;   // |Ω_D|, E_J/ħ
    double omega_d_phase = 0.0; // ν = e^{i·phase}; only 0 and π keep the real gauge
    double delta = 0.0;         // Δ = ω₃ − ω₀, E_J/ħ

    void validate() const {
        if (!(omega_d_mag >= 0.0) || !std::isfinite(omega_d_mag))
            throw std::invalid_argument("Rabi frequency must be finite and non-negative");
        if (!std::isfinite(delta)) throw std::invalid_argument("detuning must be finite");
    }
    cplx omega_d() const { return std::polar(omega_d_mag, omega_d_phase); }
};

struct DressedParams {
    double omega = 0.0; // Ω = √(Δ² + 4|Ω_D|²)
    double theta = 0.0; // tan θ = √((Ω−Δ)/(Ω+Δ))
    cplx nu{1.0, 0.0};  // Ω_D/|Ω_D|
};

// θ = ½ atan2(2|Ω_D|, Δ): equal to the tangent form, continuous through Δ = 0 and
// |Ω_D| = 0, and tending to π/2 (not 0) for an undriven, negatively detuned transition.
inline DressedParams dressed_params(double delta, cplx omega_d) {
    const double m = std::abs(omega_d);
    DressedParams d;
    d.omega = std::hypot(delta, 2.0 * m);
    d.theta = 0.5 * std::atan2(2.0 * m, delta);
    d.nu = m > 0.0 ? omega_d / m : cplx(1.0, 0.0);
    return d;
}

struct DampingRates {
    double g11 = 0.0, g22 = 0.0, g12 = 0.0, g21 = 0.0; // E_J/ħ
};

// Frequencies at which the bath is sampled.
template <class Real = double>
struct ShiftedFrequencies {
    Real w0 = 0, w0p = 0, w0m = 0; // ω₀, ω₀ ± Ω
    Real w1p = 0, w1m = 0;         // ω₁ + (Δ ± Ω)/2
    Real wpp = 0, wpm = 0;         // ω′ + (Δ ± Ω)/2
    Real big_omega = 0;
};

template <class Real = double>
ShiftedFrequencies<Real> shifted_frequencies(const TransitionFrequencies& fr, Real delta, Real big_omega) {
    ShiftedFrequencies<Real> s;
    const Real d = delta, om1 = fr.omega1;
    s.big_omega = big_omega;
    s.w0 = Real(fr.omega3) - d;
    s.w0p = s.w0 + s.big_omega;
    s.w0m = s.w0 - s.big_omega;
    const Real wprime = s.w0 + om1;
    s.w1p = om1 + (d + s.big_omega) / 2;
    s.w1m = om1 + (d - s.big_omega) / 2;
    s.wpp = wprime + (d + s.big_omega) / 2;
    s.wpm = wprime + (d - s.big_omega) / 2;
    return s;
}

// The cross rates are small differences of bath samples taken MHz apart at GHz
// frequencies; coefficients, weights and their contraction are carried in long double
// so that γ12, γ21 come out accurate to double precision despite that cancellation.
using RateReal = long double;

// a1[k] multiplies the k-th current weight of γ11, a2 of γ12, b1 of γ21, b2 of γ22.
struct RateCoefficients {
    std::array<RateReal, 6> a1{};
    std::array<RateReal, 4> a2{};
    std::array<RateReal, 4> b1{};
    std::array<RateReal, 6> b2{};
};

inline RateCoefficients rate_coefficients(const TransitionFrequencies& fr, const DriveConfig& drive,
                                          const BathParams& bath) {
    using L = RateReal;
    const L nu = dressed_params(drive.delta, drive.omega_d()).nu.real();
    const L big_omega = std::hypot(L(drive.delta), 2 * L(drive.omega_d_mag));
    const auto w = shifted_frequencies<L>(fr, drive.delta, big_omega);
    auto S = [&](L x) { return spectral_density(x, bath); };
    auto R = [&](L x) { return r_function(x, bath); };

    // Double-angle values straight from Ω, Δ, |Ω_D|: sin 2θ vanishes exactly without drive.
    const L sn2 = big_omega > 0 ? 2 * L(drive.omega_d_mag) / big_omega : L(0);
    const L cs2 = big_omega > 0 ? L(drive.delta) / big_omega : L(1);
    const L s2 = (1 - cs2) / 2, c2 = (1 + cs2) / 2;
    const L q = sn2 * sn2;
    const L Om = w.big_omega;
    const L R0 = R(L(0)), Rp = R(Om), Rm = R(-Om);

    RateCoefficients k;
    k.a1[0] = s2 * S(w.w1p) + c2 * S(w.w1m);
    k.a1[1] = c2 / 2 * R(-w.wpp) + s2 / 2 * R(-w.wpm);
    k.a1[2] = c2 * c2 / 2 * R(-w.w0p) + s2 * s2 / 2 * R(-w.w0m) + q / 4 * R(-w.w0);
    k.a1[3] = R0 / 2;
    k.a1[4] = -q / 8 * Rp - q / 8 * Rm - (1 + cs2 * cs2) / 4 * R0;
    k.a1[5] = q / 8 * Rp + q / 8 * Rm - q / 4 * R0;

    const L g = nu * sn2 / 4;
    k.a2[0] = g * (R(w.w1p) - R(w.w1m));
    k.a2[1] = -g * c2 * R(-w.w0p) + g * s2 * R(-w.w0m) + g * cs2 * R(-w.w0);
    k.a2[2] = -g * c2 * Rp + g * s2 * Rm + g * cs2 * R0;
    k.a2[3] = g * c2 * Rp - g * s2 * Rm - g * cs2 * R0;

    k.b1[0] = g * (R(w.wpp) - R(w.wpm));
    k.b1[1] = g * c2 * R(w.w0p) - g * s2 * R(w.w0m) - g * cs2 * R(w.w0);
    k.b1[2] = g * s2 * Rp - g * c2 * Rm + g * cs2 * R0;
    k.b1[3] = -g * s2 * Rp + g * c2 * Rm - g * cs2 * R0;

    k.b2[0] = s2 / 2 * R(-w.w1p) + c2 / 2 * R(-w.w1m);
    k.b2[1] = c2 * S(w.wpp) + s2 * S(w.wpm);
    k.b2[2] = c2 * c2 / 2 * R(w.w0p) + s2 * s2 / 2 * R(w.w0m) + q / 4 * R(w.w0);
    k.b2[3] = R0 / 2;
    k.b2[4] = q / 8 * Rp + q / 8 * Rm - q / 4 * R0;
    k.b2[5] = -q / 8 * Rp - q / 8 * Rm - (1 + cs2 * cs2) / 4 * R0;
    return k;
}

// Current weights paired with each coefficient, in the same order as RateCoefficients.
struct CurrentWeights {
    std::array<RateReal, 6> g11{};
    std::array<RateReal, 4> g12{};
    std::array<RateReal, 4> g21{};
    std::array<RateReal, 6> g22{};
};

inline CurrentWeights current_weights(const LoopCurrentMatrix& I) {
    using L = RateReal;
    const L i01 = I(0, 1), i02 = I(0, 2), i12 = I(1, 2);
    const L a01 = i01 * i01, a02 = i02 * i02, a12 = i12 * i12;
    const L i00 = I(0, 0), i11 = I(1, 1), i22 = I(2, 2);
    const L d1 = i00 - i11, d2 = i00 - i22;
    CurrentWeights w;
    w.g11 = {a01, a02, a12, d1 * i00, d1 * i11, d1 * i22};
    w.g12 = {a01, a12, d1 * i11, d1 * i22};
    w.g21 = {a02, a12, d2 * i11, d2 * i22};
    w.g22 = {a01, a02, a12, d2 * i00, d2 * i11, d2 * i22};
    return w;
}

inline DampingRates combine_rates(const RateCoefficients& k, const CurrentWeights& w) {
    auto dot = [](const auto& x, const auto& y) {
        RateReal acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
        return static_cast<double>(acc);
    };
    return {dot(k.a1, w.g11), dot(k.b2, w.g22), dot(k.a2, w.g12), dot(k.b1, w.g21)};
}

// Warnings (not errors) when the RWA or the ground-state approximation is stretched.
inline std::vector<std::string> rate_warnings(const TransitionFrequencies& fr, const DriveConfig& drive,
                                              const BathParams& bath) {
    std::vector<std::string> out;
    const double lim = 0.05 * std::min(fr.omega1, fr.omega3);
    if (drive.omega_d_mag > lim) out.emplace_back("Rabi frequency exceeds 5% of a transition frequency (RWA)");
    if (std::abs(drive.delta) > lim) out.emplace_back("detuning exceeds 5% of a transition frequency (RWA)");
    if (bath.thermal() > 0.2 * fr.omega1) out.emplace_back("k_B T exceeds 0.2 hbar omega1; thermal populations ignored");
    return out;
}

inline DampingRates damping_rates(const LoopCurrentMatrix& currents, const TransitionFrequencies& freqs,
                                  const DriveConfig& drive, const BathParams& bath,
                                  std::vector<std::string>* warnings = nullptr) {
    drive.validate();
    bath.validate();
    if (currents.size() < 3) throw std::invalid_argument("damping rates need a 3x3 current matrix");
    const cplx nu = std::polar(1.0, drive.omega_d_phase);
    if (std::abs(nu.imag()) > 1e-12)
        throw std::invalid_argument("drive phase must be 0 or pi (real gauge)");
    if (warnings) {
        auto w = rate_warnings(freqs, drive, bath);
        warnings->insert(warnings->end(), w.begin(), w.end());
    }
    return combine_rates(rate_coefficients(freqs, drive, bath), current_weights(currents));
}

// Everything needed to evaluate rates and response at one operating point.
struct OperatingPoint {
    CircuitParams circuit;
    BasisTruncation trunc;
    double beta = 1e-4;
    double cutoff_multiplier = 100.0; // ω_c = multiplier·ω_s
    double temperature = 0.025;       // kelvin
    DriveConfig drive;
};

inline BathParams make_bath(const OperatingPoint& op) {
    const auto ref = optimal_point_reference(op.circuit.alpha, op.circuit.ej_over_ec, op.trunc);
    BathParams b;
    b.beta = op.beta;
    b.omega_c = op.cutoff_multiplier * ref.omega_s;
    b.i_s = ref.i_s;
    b.temperature = op.temperature;
    b.ej_scale = op.circuit.ej_scale;
    b.validate();
    return b;
}

enum class RateAxis { flux, temperature, rabi };

struct RateRow {
    double x = 0.0; // f, kelvin, or |Ω_D| in E_J/ħ
    DampingRates rates;
    std::vector<std::string> warnings;
    std::string error;
};

inline std::vector<RateRow> sweep_rates(RateAxis axis, const std::vector<double>& grid, const OperatingPoint& fixed,
                                        int jobs = 1) {
    for (double x : grid)
        if ((axis != RateAxis::flux && x < 0.0) || (axis == RateAxis::flux && (x < 0.0 || x > 1.0)))
            throw std::invalid_argument("sweep grid value outside the physical range");
    std::optional<DeviceState> shared;
    if (axis != RateAxis::flux) shared = analyze_device(fixed.circuit, fixed.trunc);

    std::vector<RateRow> rows(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        RateRow& row = rows[i];
        row.x = grid[i];
        try {
            OperatingPoint op = fixed;
            switch (axis) {
            case RateAxis::flux: op.circuit.f = grid[i]; break;
            case RateAxis::temperature: op.temperature = grid[i]; break;
            case RateAxis::rabi: op.drive.omega_d_mag = grid[i]; break;
            }
            const DeviceState dev = shared ? *shared : analyze_device(op.circuit, op.trunc);
            row.rates = damping_rates(dev.currents, dev.freqs, op.drive, make_bath(op), &row.warnings);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

} // namespace sfqc
