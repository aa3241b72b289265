// test_linear_response.cpp — χ₀₁, χ₀₂, χ_q, two-resonance decomposition, Green functions.
#include <sfqc/linear_response.hpp>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

using namespace sfqc;

namespace {

DriveConfig drive_of(double rabi, double delta = 0.0, double phase = 0.0) {
    DriveConfig d;
    d.omega_d_mag = rabi;
    d.delta = delta;
    d.omega_d_phase = phase;
    return d;
}

OperatingPoint point(double f, double T_mK, double rabi_MHz) {
    OperatingPoint op;
    op.circuit.f = f;
    op.temperature = T_mK * 1e-3;
    op.drive.omega_d_mag = units::from_MHz(rabi_MHz, op.circuit.ej_scale);
    return op;
}

const cplx I(0.0, 1.0);

} // namespace

TEST(Chi01, UndrivenResonantValue) {
    const DampingRates r{1.0, 1.0, 0.0, 0.0};
    const auto c = chi01(0.0, r, drive_of(0.0), 1.0);
    EXPECT_NEAR(c.real(), 0.0, 1e-15);
    EXPECT_NEAR(c.imag(), 1.0, 1e-15);
}

TEST(Chi01, UndrivenIsLorentzian) {
    const DampingRates r{0.3, 0.7, 0.0, 0.0};
    for (double d : {-2.0, -0.3, 0.0, 0.1, 1.5}) {
        const auto c = chi01(d, r, drive_of(0.0), 0.8);
        EXPECT_NEAR(std::abs(c - (-0.64 / (d + I * 0.3))), 0.0, 1e-14);
        EXPECT_NEAR(c.imag(), 0.64 * 0.3 / (d * d + 0.09), 1e-14);
    }
}

TEST(Chi01, ResonantStrongDriveCentre) {
    const DampingRates r{0.1, 0.1, 0.0, 0.0};
    const auto c = chi01(0.0, r, drive_of(1.0), 1.0);
    EXPECT_NEAR(std::abs(c - cplx(0.0, 0.1 / 1.01)), 0.0, 1e-15);
}

TEST(Chi01, ReflectionSymmetryAtZeroDetuning) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int k = 0; k < 20; ++k) {
        const DampingRates r{u(rng), u(rng), 0.0, 0.0};
        const auto drive = drive_of(u(rng));
        for (double d : {0.1, 0.7, 3.0}) {
            const auto a = chi01(d, r, drive, 1.0), b = chi01(-d, r, drive, 1.0);
            EXPECT_NEAR(a.imag(), b.imag(), 1e-13 * std::abs(a));
            EXPECT_NEAR(a.real(), -b.real(), 1e-13 * std::abs(a));
        }
    }
}

TEST(Chi02, VanishesWithSelectionRule) {
    const auto ctx = make_context(point(0.5, 25.0, 0.37));
    EXPECT_LT(ctx.i02_abs, 1e-8);
    for (double d : {-1e-4, 0.0, 1e-4}) {
        const auto c = chi02(d, ctx.rates, ctx.drive, ctx.i02_abs);
        const auto c1 = chi01(d, ctx.rates, ctx.drive, ctx.i01_abs);
        EXPECT_LT(std::abs(c), 1e-14 * std::abs(c1));
    }
}

TEST(Chi02, RoleSwapMirrorsChi01) {
    // χ₀₂ with (γ11, γ22) equals χ₀₁ with the rates swapped at Δ = 0
    const DampingRates r{0.4, 1.1, 0.0, 0.0}, swapped{1.1, 0.4, 0.0, 0.0};
    for (double d : {-1.0, 0.0, 0.3}) {
        const auto a = chi02(d, r, drive_of(0.6), 0.7), b = chi01(d, swapped, drive_of(0.6), 0.7);
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14);
    }
}

TEST(ChiQ, SumOfWindowsAndLinearInCurrentSquared) {
    const auto ctx = make_context(point(0.525, 25.0, 1.4));
    for (double off : {-50.0, 0.0, 3.0}) {
        const double wp = ctx.freqs.omega1 + units::from_MHz(off, units::ej_scale_from_GHz(144.0));
        const auto p = chi_q(wp, ctx);
        EXPECT_EQ(p.chi_q, p.chi01 + p.chi02);
        EXPECT_FALSE(p.extrapolated);
        auto doubled = ctx;
        doubled.i01_abs *= 2;
        EXPECT_NEAR(std::abs(chi_q(wp, doubled).chi01 - 4.0 * p.chi01), 0.0, 1e-12 * std::abs(p.chi01));
    }
}

TEST(ChiQ, NegativeFrequencyIsConjugatedAndFlagged) {
    const auto ctx = make_context(point(0.51, 25.0, 1.0));
    const double wp = ctx.freqs.omega1 * 1.0001;
    const auto pos = chi_q(wp, ctx), neg = chi_q(-wp, ctx);
    EXPECT_TRUE(neg.extrapolated);
    EXPECT_EQ(neg.chi_q, std::conj(pos.chi_q));
}

TEST(ChiQ, WindowsAreSeparatedAtFigureFlux) {
    const auto ctx = make_context(point(0.525, 25.0, 1.4));
    const double span = units::from_MHz(10.0, units::ej_scale_from_GHz(144.0));
    for (int k = -10; k <= 10; ++k) {
        const auto a = chi_q(ctx.freqs.omega1 + span * k / 10.0, ctx);
        EXPECT_LT(std::abs(a.chi02), 1e-2 * std::abs(a.chi01));
        const auto b = chi_q(ctx.omega_prime() + span * k / 10.0, ctx);
        EXPECT_LT(std::abs(b.chi01), 1e-2 * std::abs(b.chi02));
    }
}

TEST(Decompose, WeakDriveRootsOnImaginaryAxis) {
    // (δ + 3i)(δ + i) = 1/4 → δ = −2i ± i√0.75
    const DampingRates r{3.0, 1.0, 0.0, 0.0};
    const auto p = decompose(Window::w01, r, drive_of(0.5));
    EXPECT_EQ(p.tag, RootSplitting::imaginary_split);
    EXPECT_NEAR(p.delta_plus.real(), 0.0, 1e-14);
    EXPECT_NEAR(p.delta_minus.real(), 0.0, 1e-14);
    EXPECT_NEAR(p.delta_plus.imag(), -2.0 + std::sqrt(0.75), 1e-14);
    EXPECT_NEAR(p.delta_minus.imag(), -2.0 - std::sqrt(0.75), 1e-14);
}

TEST(Decompose, StrongDriveSplitsRealParts) {
    const DampingRates r{1.0, 1.0, 0.0, 0.0};
    const auto p = decompose(Window::w01, r, drive_of(2.0));
    EXPECT_EQ(p.tag, RootSplitting::real_split);
    EXPECT_NEAR(std::abs(p.delta_plus - cplx(2.0, -1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(p.delta_minus - cplx(-2.0, -1.0)), 0.0, 1e-14);
}

TEST(Decompose, CrossRatesBreakWidthSymmetry) {
    const DampingRates r{1.0, 1.0, 0.1, 0.1};
    const auto p = decompose(Window::w01, r, drive_of(2.0));
    EXPECT_GT(std::abs(p.delta_plus.imag() - p.delta_minus.imag()), 1e-3);
}

TEST(Decompose, DegenerateRootsThrow) {
    const DampingRates r{3.0, 1.0, 0.0, 0.0};
    EXPECT_THROW(decompose(Window::w01, r, drive_of(1.0)), BifurcationError);
    EXPECT_THROW(decompose(Window::w02, r, drive_of(1.0)), BifurcationError);
}

TEST(Decompose, PartialFractionsReproduceChiOnRandomSets) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> g(0.1, 3.0), od(0.0, 5.0), dl(-2.0, 2.0), x(-0.05, 0.05);
    for (int k = 0; k < 20; ++k) {
        const DampingRates r{g(rng), g(rng), x(rng), x(rng)};
        const auto drive = drive_of(od(rng), dl(rng), k % 2 ? 3.141592653589793 : 0.0);
        const double scale = response_scale(r, drive);
        for (auto w : {Window::w01, Window::w02}) {
            const auto p = decompose(w, r, drive, 0.9);
            EXPECT_LT(std::abs(d1(p.delta_plus, r, drive)), 1e-10 * scale * scale);
            EXPECT_LT(std::abs(d1(p.delta_minus, r, drive)), 1e-10 * scale * scale);
            EXPECT_LT(p.delta_plus.imag(), 0.0);
            EXPECT_LT(p.delta_minus.imag(), 0.0);
            double worst = 0.0;
            for (int j = 0; j <= 400; ++j) {
                const double d = -4.0 * scale + 8.0 * scale * j / 400.0;
                const cplx direct = w == Window::w01 ? chi01(d, r, drive, 0.9) : chi02(d, r, drive, 0.9);
                worst = std::max(worst, std::abs(p.evaluate(d) - direct) / std::max(std::abs(direct), 1e-300));
            }
            EXPECT_LT(worst, 1e-10);
        }
    }
}

TEST(Decompose, OrderingByRealThenImaginaryPart) {
    const DampingRates r{0.2, 1.0, 0.0, 0.0};
    const auto strong = decompose(Window::w01, r, drive_of(3.0, 0.5));
    EXPECT_GT(strong.delta_plus.real(), strong.delta_minus.real());
    const auto weak = decompose(Window::w01, r, drive_of(0.1));
    EXPECT_GT(weak.delta_plus.imag(), weak.delta_minus.imag());
}

TEST(GreenFunctions, MatchDirectInverse) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> g(0.1, 2.0), x(-0.2, 0.2), w(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        const DampingRates r{g(rng), g(rng), x(rng), x(rng)};
        const auto drive = drive_of(g(rng), x(rng), k % 2 ? 3.141592653589793 : 0.0);
        const cplx om = w(rng);
        const cplx od = drive.omega_d();
        // steady state of the coherence equations is X = i N⁻¹ F with this N; det N = −D₁
        Eigen::Matrix2cd N;
        N << om + I * r.g11, I * r.g12 - od, I * r.g21 - std::conj(od), om - drive.delta + I * r.g22;
        const Eigen::Matrix2cd inv = N.inverse();
        const auto G = green_functions(om, r, drive);
        const cplx D = d1(om, r, drive);
        EXPECT_NEAR(std::abs(D + N.determinant()), 0.0, 1e-12 * std::abs(D));
        EXPECT_NEAR(std::abs(G.g11 + I * inv(1, 1)), 0.0, 1e-12 * std::abs(G.g11));
        EXPECT_NEAR(std::abs(G.g22 + I * inv(0, 0)), 0.0, 1e-12 * std::abs(G.g22));
        EXPECT_NEAR(std::abs(G.g12 - I * inv(0, 1)), 0.0, 1e-12 * std::abs(G.g12) + 1e-15);
        EXPECT_NEAR(std::abs(G.g21 - I * inv(1, 0)), 0.0, 1e-12 * std::abs(G.g21) + 1e-15);
    }
}

TEST(GreenFunctions, DecoupledWhenUndriven) {
    const DampingRates r{0.5, 0.8, 0.0, 0.0};
    const auto G = green_functions(0.3, r, drive_of(0.0));
    EXPECT_EQ(G.g12, cplx(0.0));
    EXPECT_EQ(G.g21, cplx(0.0));
    // G₂₂ carries the 01 Lorentzian: χ₀₁ = −i|I₀₁|² G₂₂
    EXPECT_NEAR(std::abs(-I * G.g22 - chi01(0.3, r, drive_of(0.0), 1.0)), 0.0, 1e-14);
}
