// fd_grid.hpp — real-space finite-difference eigensolver for the three-junction loop.
//
// Works in the junction phases (φ₁, φ₂) on a periodic N×N grid with 8th-order central
// stencils; nothing here touches the charge basis. In E_J units with a = 2E_c/E_J,
// b = a/(1+2α):
//
//   H = −(a+b)(∂₁² + ∂₂²) − 2(a−b)∂₁∂₂ + 2 − cos φ₁ − cos φ₂ + α[1 − cos(2πf + φ₂ − φ₁)]
//   I = α/(1+2α)·[sin φ₂ − sin φ₁ − sin(2πf + φ₂ − φ₁)]
//
// The lowest states come from block LOBPCG preconditioned by the exact inverse of the
// shifted kinetic symbol (applied with FFTW).
#pragma once

#include <Eigen/Dense>
#include <fftw3.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

struct GridOptions {
    int n = 201;
    int extra_block = 3;  // LOBPCG block = levels + extra_block
    double tol = 1e-9;    // residual norm for converged levels
    int max_iter = 1500;
};

struct GridSolution {
    std::vector<double> energies; // ascending, E_J
    Eigen::MatrixXd vectors;      // columns normalised to Σ x² = 1
    int iterations = 0;
    double max_residual = 0.0;
};

namespace detail {

inline constexpr std::array<double, 9> c2{-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                          8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
inline constexpr std::array<double, 9> c1{1.0 / 280, -4.0 / 105, 1.0 / 5,   -4.0 / 5, 0.0,
                                          4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};

class GridOperator {
public:
    GridOperator(double alpha, double ej_over_ec, double f, int n)
        : n_(n), h_(2.0 * std::numbers::pi / n), v_(n * n) {
        a_ = 2.0 / ej_over_ec;
        b_ = a_ / (1.0 + 2.0 * alpha);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double p1 = i * h_, p2 = j * h_;
                v_[i * n + j] = 2.0 - std::cos(p1) - std::cos(p2) +
                                alpha * (1.0 - std::cos(2.0 * std::numbers::pi * f + p2 - p1));
            }
        wrap_.resize(static_cast<std::size_t>(n) * 9);
        for (int i = 0; i < n; ++i)
            for (int o = -4; o <= 4; ++o) wrap_[static_cast<std::size_t>(i * 9 + o + 4)] = ((i + o) % n + n) % n;
    }

    int size() const { return n_ * n_; }

    void apply(const double* x, double* y) const {
        const int n = n_;
        const double k2 = (a_ + b_) / (h_ * h_), k11 = 2.0 * (a_ - b_) / (h_ * h_);
        std::vector<double> d(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int o = 0; o < 9; ++o) s += c1[o] * x[i * n + wrap(j, o)];
                d[static_cast<std::size_t>(i * n + j)] = s;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double lap = 0.0, mix = 0.0;
                for (int o = 0; o < 9; ++o) {
                    lap += c2[o] * (x[wrap(i, o) * n + j] + x[i * n + wrap(j, o)]);
                    mix += c1[o] * d[static_cast<std::size_t>(wrap(i, o) * n + j)];
                }
                y[i * n + j] = v_[i * n + j] * x[i * n + j] - k2 * lap - k11 * mix;
            }
    }

    // Fourier symbol of the kinetic part at grid wavenumbers (k₁, k₂).
    double kinetic_symbol(int k1, int k2) const {
        auto s2 = [&](int k) {
            double s = 0.0;
            for (int o = 0; o < 9; ++o) s -= c2[o] * std::cos((o - 4) * 2.0 * std::numbers::pi * k / n_);
            return s / (h_ * h_);
        };
        auto s1 = [&](int k) {
            double s = 0.0;
            for (int o = 0; o < 9; ++o) s += c1[o] * std::sin((o - 4) * 2.0 * std::numbers::pi * k / n_);
            return s / h_;
        };
        return (a_ + b_) * (s2(k1) + s2(k2)) + 2.0 * (a_ - b_) * s1(k1) * s1(k2);
    }

    const std::vector<double>& potential() const { return v_; }
    double step() const { return h_; }

private:
    int wrap(int i, int o) const { return wrap_[static_cast<std::size_t>(i * 9 + o)]; }

    int n_;
    double h_, a_ = 0, b_ = 0;
    std::vector<double> v_;
    std::vector<int> wrap_;
};

class KineticPreconditioner {
public:
    KineticPreconditioner(const GridOperator& op, int n, double shift) : n_(n), nh_(n / 2 + 1) {
        real_ = fftw_alloc_real(static_cast<std::size_t>(n) * n);
        spec_ = fftw_alloc_complex(static_cast<std::size_t>(n) * nh_);
        fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, spec_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(n, n, spec_, real_, FFTW_ESTIMATE);
        inv_.resize(static_cast<std::size_t>(n) * nh_);
        for (int k1 = 0; k1 < n; ++k1)
            for (int k2 = 0; k2 < nh_; ++k2)
                inv_[static_cast<std::size_t>(k1 * nh_ + k2)] =
                    1.0 / ((op.kinetic_symbol(k1, k2) + shift) * double(n) * double(n));
    }
    ~KineticPreconditioner() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    KineticPreconditioner(const KineticPreconditioner&) = delete;
    KineticPreconditioner& operator=(const KineticPreconditioner&) = delete;

    void apply(const double* x, double* y) {
        const std::size_t nn = static_cast<std::size_t>(n_) * n_;
        std::copy(x, x + nn, real_);
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < inv_.size(); ++k) {
            spec_[k][0] *= inv_[k];
            spec_[k][1] *= inv_[k];
        }
        fftw_execute(bwd_);
        std::copy(real_, real_ + nn, y);
    }

private:
    int n_, nh_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, bwd_;
    std::vector<double> inv_;
};

inline Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& s) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
    return qr.householderQ() * Eigen::MatrixXd::Identity(s.rows(), s.cols());
}

} // namespace detail

inline GridSolution solve_grid(double alpha, double ej_over_ec, double f, int levels, GridOptions opt = {}) {
    detail::GridOperator op(alpha, ej_over_ec, f, opt.n);
    detail::KineticPreconditioner prec(op, opt.n, 1.0);
    const int dim = op.size(), k = levels + opt.extra_block;

    auto apply_h = [&](const Eigen::MatrixXd& x) {
        Eigen::MatrixXd y(x.rows(), x.cols());
        for (int c = 0; c < x.cols(); ++c) op.apply(x.col(c).data(), y.col(c).data());
        return y;
    };

    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(dim, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < dim; ++r) x(r, c) = gauss(rng);
    x = detail::orthonormal_columns(x);
    {
        const Eigen::MatrixXd ax = apply_h(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.transpose() * ax);
        x = x * es.eigenvectors();
    }
    Eigen::MatrixXd ax = apply_h(x);
    Eigen::MatrixXd p(dim, 0);

    GridSolution out;
    for (int it = 0; it < opt.max_iter; ++it) {
        const Eigen::VectorXd lambda = (x.transpose() * ax).diagonal();
        const Eigen::MatrixXd r = ax - x * lambda.asDiagonal();
        double worst = 0.0;
        for (int c = 0; c < levels; ++c) worst = std::max(worst, r.col(c).norm());
        out.iterations = it;
        out.max_residual = worst;
        if (worst < opt.tol) break;

        Eigen::MatrixXd w(dim, k);
        for (int c = 0; c < k; ++c) prec.apply(r.col(c).data(), w.col(c).data());
        Eigen::MatrixXd s(dim, 2 * k + p.cols());
        s << x, w, p;
        const Eigen::MatrixXd q = detail::orthonormal_columns(s);
        const Eigen::MatrixXd aq = apply_h(q);
        Eigen::MatrixXd g = q.transpose() * aq;
        g = 0.5 * (g + g.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        const Eigen::MatrixXd cmat = es.eigenvectors().leftCols(k);
        const Eigen::MatrixXd xn = q * cmat;
        p = xn - x * (x.transpose() * xn);
        x = xn;
        ax = aq * cmat;
    }
    if (out.max_residual >= opt.tol) throw std::runtime_error("grid LOBPCG did not converge");

    const Eigen::VectorXd lambda = (x.transpose() * ax).diagonal();
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) order[static_cast<std::size_t>(c)] = c;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return lambda(i) < lambda(j); });
    out.vectors.resize(dim, levels);
    for (int l = 0; l < levels; ++l) {
        out.energies.push_back(lambda(order[static_cast<std::size_t>(l)]));
        out.vectors.col(l) = x.col(order[static_cast<std::size_t>(l)]).normalized();
    }
    return out;
}

// ⟨i|I|j⟩ for the grid states, I evaluated pointwise (units I₀).
inline Eigen::MatrixXd grid_currents(const GridSolution& s, double alpha, double f, int n = 201) {
    const double h = 2.0 * std::numbers::pi / n, c = alpha / (1.0 + 2.0 * alpha);
    Eigen::VectorXd cur(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double p1 = i * h, p2 = j * h;
            cur(i * n + j) = c * (std::sin(p2) - std::sin(p1) - std::sin(2.0 * std::numbers::pi * f + p2 - p1));
        }
    return s.vectors.transpose() * cur.asDiagonal() * s.vectors;
}

} // namespace oracle
