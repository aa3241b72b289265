// loop_current.hpp — loop-current operator and gauge-fixed matrix elements I_ij (units I₀).
#pragma once

#include <sfqc/circuit_spectrum.hpp>

#include <cmath>
#include <sstream>

namespace sfqc {

// Î/I₀ = c [2 cos φ_p sin φ_m − sin(2πf + 2φ_m)], c = α/(1+2α).
inline HermitianMatrix build_current_operator(const CircuitParams& p, const BasisTruncation& trunc) {
    p.validate();
    auto basis = std::make_shared<const ChargeBasis>(trunc);
    const int d = basis->dim();
    const double c = p.alpha / (1.0 + 2.0 * p.alpha);
    const cplx two_i(0.0, 2.0);
    const cplx up = std::polar(1.0, units::two_pi * p.f);

    Eigen::MatrixXcd I = Eigen::MatrixXcd::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const auto [np, nm] = basis->state(j);
        for (int sp : {-1, 1})
            for (int sm : {-1, 1})
                if (int i = basis->index(np + sp, nm + sm); i >= 0) I(i, j) += c * double(sm) / two_i;
        if (int i = basis->index(np, nm + 2); i >= 0) I(i, j) += -c * up / two_i;
        if (int i = basis->index(np, nm - 2); i >= 0) I(i, j) += c * std::conj(up) / two_i;
    }
    return {std::move(I), std::move(basis)};
}

struct LoopCurrentMatrix {
    Eigen::MatrixXd elements;          // real symmetric, I₀
    std::vector<double> gauge_phases;  // phase applied to each eigenvector
    std::vector<int> gauge_reference;  // level j whose I_{jl} was made non-negative (−1 for |0⟩)
    double max_residual_imag = 0.0;

    double operator()(int i, int j) const { return elements(i, j); }
    int size() const { return static_cast<int>(elements.rows()); }
};

// Gauge: |0⟩ untouched; |1⟩ rotated so I₀₁ ≥ 0, |2⟩ so I₁₂ ≥ 0; higher levels against
// their largest coupling to a lower level.
inline LoopCurrentMatrix current_matrix_elements(const Spectrum& spec, const HermitianMatrix& current_op,
                                                 int n_keep = 3) {
    if (n_keep < 1 || n_keep > spec.n_levels) throw std::invalid_argument("n_keep out of range");
    if (current_op.values.rows() != spec.eigenvectors.rows() ||
        (spec.basis && current_op.basis && !(*spec.basis == *current_op.basis)))
        throw std::invalid_argument("current operator basis does not match the spectrum basis");

    const Eigen::MatrixXcd V = spec.eigenvectors.leftCols(n_keep);
    Eigen::MatrixXcd M = V.adjoint() * current_op.values * V;

    LoopCurrentMatrix out;
    out.gauge_phases.assign(static_cast<std::size_t>(n_keep), 0.0);
    out.gauge_reference.assign(static_cast<std::size_t>(n_keep), -1);
    constexpr double negligible = 1e-12;
    for (int l = 1; l < n_keep; ++l) {
        int ref = l - 1;
        if (l > 2 || std::abs(M(ref, l)) < negligible) {
            ref = 0;
            for (int j = 1; j < l; ++j)
                if (std::abs(M(j, l)) > std::abs(M(ref, l))) ref = j;
        }
        double phase = 0.0;
        if (std::abs(M(ref, l)) >= negligible) phase = -std::arg(M(ref, l));
        out.gauge_phases[static_cast<std::size_t>(l)] = phase;
        out.gauge_reference[static_cast<std::size_t>(l)] = ref;
        const cplx u = std::polar(1.0, phase);
        M.col(l) *= u;
        M.row(l) *= std::conj(u);
    }

    out.max_residual_imag = 0.0;
    int bad_i = 0, bad_j = 0;
    for (int i = 0; i < n_keep; ++i)
        for (int j = 0; j < n_keep; ++j)
            if (std::abs(M(i, j).imag()) > out.max_residual_imag) {
                out.max_residual_imag = std::abs(M(i, j).imag());
                bad_i = i;
                bad_j = j;
            }
    if (out.max_residual_imag > 1e-8) {
        std::ostringstream os;
        os << "current element I_" << bad_i << bad_j << " keeps imaginary part " << out.max_residual_imag
           << " after gauge fixing";
        throw NumericalFailure(os.str());
    }
    out.elements = 0.5 * (M.real() + M.real().transpose());
    return out;
}

struct CurrentRow {
    double f = 0.0;
    double i01 = 0, i02 = 0, i12 = 0; // moduli
    double i00 = 0, i11 = 0, i22 = 0;
    std::string error;
};

inline std::vector<CurrentRow> sweep_currents(CircuitParams params, const std::vector<double>& f_grid,
                                              const BasisTruncation& trunc, int jobs = 1) {
    if (f_grid.empty()) throw std::invalid_argument("flux grid is empty");
    std::vector<CurrentRow> rows(f_grid.size());
    parallel_for(f_grid.size(), jobs, [&](std::size_t k) {
        CurrentRow& row = rows[k];
        row.f = f_grid[k];
        try {
            CircuitParams p = params;
            p.f = f_grid[k];
            const auto s = solve_spectrum(build_hamiltonian(p, trunc), 3);
            const auto I = current_matrix_elements(s, build_current_operator(p, trunc), 3);
            row.i01 = std::abs(I(0, 1));
            row.i02 = std::abs(I(0, 2));
            row.i12 = std::abs(I(1, 2));
            row.i00 = I(0, 0);
            row.i11 = I(1, 1);
            row.i22 = I(2, 2);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

} // namespace sfqc
