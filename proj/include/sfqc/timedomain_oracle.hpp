// timedomain_oracle.hpp — χ_q from direct integration of the coherence equations.
//
// The linearised equations (populations frozen at σ₀₀ = 1, σ₂₁ = σ₁₂ = 0), in the
// rotating frame with Γ_lm → iγ_lm and ħ = 1:
//
//   dσ₀₁/dt = −γ11 σ₀₁ − (γ12 + iΩ_D) σ₀₂ + i(Φ/2) I₁₀ e^{−iδ₁t}
//   dσ₀₂/dt = −(γ21 + iΩ_D*) σ₀₁ − (γ22 + iΔ) σ₀₂ + i(Φ/2) I₂₀ e^{−iδ₂t}
//
// These are the same equations the closed forms solve, reached by a different route
// (time stepping plus quadrature projection instead of algebra), so agreement checks
// the frequency-domain transcription rather than the underlying derivation.
#pragma once

#include <sfqc/linear_response.hpp>

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace sfqc {

struct ProbeConfig {
    double amplitude = 0.0;      // Φ: Φ·I/ħ is an angular frequency in E_J/ħ
    double omega_p = 0.0;        // E_J/ħ
    double duration = 0.0;       // E_J⁻¹ ħ
    double settle_fraction = 0.5;
    int steps_per_period = 64;   // per fastest retained oscillation
    int samples_per_period = 8;
};

struct CoherenceTrajectory {
    std::vector<double> t;
    std::vector<cplx> s01, s02;
    double delta1 = 0.0, delta2 = 0.0;
    std::size_t settle_index = 0; // first sample after the discarded transient
};

// Slowest decay rate of the homogeneous system, min |Im δ±|.
inline double slowest_decay(const ResponseContext& ctx) {
    const auto [dp, dm] = d1_roots(ctx.rates, ctx.drive);
    return std::min(std::abs(dp.imag()), std::abs(dm.imag()));
}

// Deep-linear defaults: coupling Φ·max|I₀ᵢ| = 1e-3·min(γ11, γ22); the discarded half of the run
// spans 12.5 decay times of the slowest mode, and never less than 10/min(γ11, γ22) in total.
inline ProbeConfig default_probe(const ResponseContext& ctx, double omega_p) {
    ProbeConfig p;
    p.omega_p = omega_p;
    const double gmin = std::min(ctx.rates.g11, ctx.rates.g22);
    const double imax = std::max(ctx.i01_abs, ctx.i02_abs);
    p.amplitude = imax > 0.0 ? 1e-3 * gmin / imax : 0.0;
    p.duration = std::max(25.0 / slowest_decay(ctx), 10.0 / gmin);
    return p;
}

inline CoherenceTrajectory integrate_coherences(const ResponseContext& ctx, const ProbeConfig& probe,
                                                std::array<cplx, 2> initial = {}) {
    const auto& r = ctx.rates;
    if (!(r.g11 > 0.0 && r.g22 > 0.0)) throw std::invalid_argument("oracle needs positive gamma11, gamma22");
    if (!(probe.duration > 0.0) || !(probe.settle_fraction >= 0.0 && probe.settle_fraction < 1.0) ||
        probe.steps_per_period < 40 || probe.samples_per_period < 1)
        throw std::invalid_argument("invalid probe configuration");
    const auto [rp, rm] = d1_roots(r, ctx.drive);
    if (!(rp.imag() < 0.0 && rm.imag() < 0.0))
        throw NumericalFailure("homogeneous coherence dynamics are not damped (Im of a root >= 0)");

    const cplx i(0.0, 1.0);
    const cplx od = ctx.drive.omega_d();
    const cplx a11 = -r.g11, a12 = -r.g12 - i * od;
    const cplx a21 = -r.g21 - i * std::conj(od), a22 = -r.g22 - i * ctx.drive.delta;
    const double d1f = probe.omega_p - ctx.freqs.omega1;
    const double d2f = probe.omega_p - ctx.omega_prime();
    const cplx f1 = i * 0.5 * probe.amplitude * ctx.i01_abs;
    const cplx f2 = i * 0.5 * probe.amplitude * ctx.i02_abs;

    // Fastest retained oscillation among the forcing and the homogeneous modes.
    const double fastest = std::max({std::abs(d1f), std::abs(d2f), std::abs(rp.real()), std::abs(rm.real()),
                                     std::abs(rp.imag()), std::abs(rm.imag())});
    const double period = units::two_pi / fastest;
    const double h_target = period / probe.steps_per_period;
    const auto n_steps = static_cast<std::size_t>(std::ceil(probe.duration / h_target));
    const double h = probe.duration / static_cast<double>(n_steps);
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(probe.steps_per_period /
                                                                                  probe.samples_per_period));
    if (n_steps > 400'000'000) throw OracleTimeout("oracle run would need more than 4e8 steps");

    using State = std::array<double, 4>;
    auto rhs = [&](const State& x, State& dx, double t) {
        const cplx s1(x[0], x[1]), s2(x[2], x[3]);
        const cplx e1 = std::polar(1.0, -d1f * t), e2 = std::polar(1.0, -d2f * t);
        const cplx ds1 = a11 * s1 + a12 * s2 + f1 * e1;
        const cplx ds2 = a21 * s1 + a22 * s2 + f2 * e2;
        dx = {ds1.real(), ds1.imag(), ds2.real(), ds2.imag()};
    };

    CoherenceTrajectory traj;
    traj.delta1 = d1f;
    traj.delta2 = d2f;
    const std::size_t settle_step = static_cast<std::size_t>(probe.settle_fraction * static_cast<double>(n_steps));
    const std::size_t n_samples = (n_steps - settle_step) / stride + 2;
    traj.t.reserve(n_samples);
    traj.s01.reserve(n_samples);
    traj.s02.reserve(n_samples);

    boost::numeric::odeint::runge_kutta4<State> stepper;
    State x{initial[0].real(), initial[0].imag(), initial[1].real(), initial[1].imag()};
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * h;
        if (k >= settle_step && (k - settle_step) % stride == 0) {
            traj.t.push_back(t);
            traj.s01.emplace_back(x[0], x[1]);
            traj.s02.emplace_back(x[2], x[3]);
        }
        if (k == n_steps) break;
        stepper.do_step(rhs, x, t, h);
        if (!std::isfinite(x[0] + x[1] + x[2] + x[3])) throw NumericalFailure("oracle integration diverged");
    }
    traj.settle_index = 0;
    return traj;
}

struct OracleEstimate {
    cplx chi;                   // I₀²/(E_J/ħ)
    cplx chi01_part, chi02_part;
    double residual = 0.0;      // worst relative projection residual of σ₀₁, σ₀₂
};

namespace detail {

// Least-squares fit x(t) ≈ A e^{−iδ₁t} + B e^{−iδ₂t}; returns (A, B, relative residual).
inline std::tuple<cplx, cplx, double> fit_two_tones(const CoherenceTrajectory& tr, const std::vector<cplx>& x) {
    cplx g11 = 0, g12 = 0, g22 = 0, b1 = 0, b2 = 0;
    double norm = 0.0;
    for (std::size_t k = tr.settle_index; k < tr.t.size(); ++k) {
        const cplx e1 = std::polar(1.0, -tr.delta1 * tr.t[k]), e2 = std::polar(1.0, -tr.delta2 * tr.t[k]);
        g11 += std::norm(e1);
        g22 += std::norm(e2);
        g12 += std::conj(e1) * e2;
        b1 += std::conj(e1) * x[k];
        b2 += std::conj(e2) * x[k];
        norm += std::norm(x[k]);
    }
    const cplx det = g11 * g22 - g12 * std::conj(g12);
    const cplx A = (g22 * b1 - g12 * b2) / det;
    const cplx B = (g11 * b2 - std::conj(g12) * b1) / det;
    double res = 0.0;
    for (std::size_t k = tr.settle_index; k < tr.t.size(); ++k) {
        const cplx e1 = std::polar(1.0, -tr.delta1 * tr.t[k]), e2 = std::polar(1.0, -tr.delta2 * tr.t[k]);
        res += std::norm(x[k] - A * e1 - B * e2);
    }
    return {A, B, norm > 0.0 ? std::sqrt(res / norm) : 0.0};
}

} // namespace detail

// Induced current at ω_P: I₀₁·(δ₁ tone of σ₀₁) + I₀₂·(δ₂ tone of σ₀₂), divided by Φ/2.
inline OracleEstimate extract_susceptibility(const CoherenceTrajectory& traj, const ProbeConfig& probe,
                                             const ResponseContext& ctx) {
    if (traj.t.size() < 16) throw OracleTimeout("too few post-settle samples to project the response");
    if (!(probe.amplitude > 0.0)) throw std::invalid_argument("probe amplitude must be positive");
    const auto [a01, b01, res01] = detail::fit_two_tones(traj, traj.s01);
    const auto [a02, b02, res02] = detail::fit_two_tones(traj, traj.s02);
    OracleEstimate est;
    est.residual = std::max(ctx.i01_abs > 0.0 ? res01 : 0.0, ctx.i02_abs > 0.0 ? res02 : 0.0);
    if (est.residual > 1e-2)
        throw NonlinearityError("projection residual " + std::to_string(est.residual) +
                                " exceeds 1% of the signal (transient or nonlinear response)");
    const double half = 0.5 * probe.amplitude;
    est.chi01_part = ctx.i01_abs * a01 / half;
    est.chi02_part = ctx.i02_abs * b02 / half;
    est.chi = est.chi01_part + est.chi02_part;
    (void)b01;
    (void)a02;
    return est;
}

// Convenience: default probe, integrate, project.
inline OracleEstimate oracle_susceptibility(const ResponseContext& ctx, double omega_p) {
    const auto probe = default_probe(ctx, omega_p);
    return extract_susceptibility(integrate_coherences(ctx, probe), probe, ctx);
}

} // namespace sfqc
