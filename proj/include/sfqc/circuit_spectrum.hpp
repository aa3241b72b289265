// circuit_spectrum.hpp — three-junction flux qubit Hamiltonian in a plane-wave charge basis.
//
// Coordinates φ_p = (φ₁+φ₂)/2, φ_m = (φ₂−φ₁)/2. Plane waves e^{i(n_p φ_p + n_m φ_m)};
// single-valuedness in the island phases φ₁, φ₂ requires n_p + n_m even, which is
// the default ("physical") sector. The odd sector is an artefact of the doubled
// (φ_p, φ_m) cell and reproduces every level a second time.
#pragma once

#include <sfqc/errors.hpp>
#include <sfqc/parallel.hpp>
#include <sfqc/units.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sfqc {

using cplx = std::complex<double>;

struct CircuitParams {
    double alpha = 0.7;
    double ej_over_ec = 48.0;
    double ej_scale = units::ej_scale_from_GHz(units::default_ej_GHz); // E_J/ħ, rad/s
    double f = 0.5;

    void validate() const {
        if (!(alpha > 0.5 && alpha < 1.0))
            throw std::invalid_argument("alpha must satisfy 0.5 < alpha < 1");
        if (!(ej_over_ec > 0.0)) throw std::invalid_argument("ej_over_ec must be positive");
        if (!(ej_scale > 0.0)) throw std::invalid_argument("ej_scale must be positive");
        if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("f must lie in [0, 1]");
    }
};

enum class ChargeSector { physical, full };

struct BasisTruncation {
    int n_p = 16;
    int n_m = 16;
    ChargeSector sector = ChargeSector::physical;

    void validate() const {
        if (n_p < 4 || n_m < 4) throw std::invalid_argument("basis truncation requires n_p, n_m >= 4");
    }
    bool operator==(const BasisTruncation&) const = default;
};

class ChargeBasis {
public:
    explicit ChargeBasis(const BasisTruncation& t) : trunc_(t) {
        t.validate();
        const int wp = 2 * t.n_p + 1, wm = 2 * t.n_m + 1;
        lookup_.assign(static_cast<std::size_t>(wp * wm), -1);
        for (int np = -t.n_p; np <= t.n_p; ++np)
            for (int nm = -t.n_m; nm <= t.n_m; ++nm) {
                if (t.sector == ChargeSector::physical && ((np + nm) % 2 != 0)) continue;
                lookup_[slot(np, nm)] = static_cast<int>(states_.size());
                states_.push_back({np, nm});
            }
        if (states_.size() < 9) throw std::invalid_argument("basis dimension below 9");
    }

    int dim() const { return static_cast<int>(states_.size()); }
    const BasisTruncation& truncation() const { return trunc_; }
    const std::array<int, 2>& state(int i) const { return states_[static_cast<std::size_t>(i)]; }

    // Index of |n_p, n_m⟩, or −1 when outside the truncation/sector.
    int index(int np, int nm) const {
        if (std::abs(np) > trunc_.n_p || std::abs(nm) > trunc_.n_m) return -1;
        return lookup_[slot(np, nm)];
    }

    bool operator==(const ChargeBasis& o) const { return trunc_ == o.trunc_; }

private:
    std::size_t slot(int np, int nm) const {
        return static_cast<std::size_t>((np + trunc_.n_p) * (2 * trunc_.n_m + 1) + (nm + trunc_.n_m));
    }

    BasisTruncation trunc_;
    std::vector<std::array<int, 2>> states_;
    std::vector<int> lookup_;
};

// Dense Hermitian operator; `basis` is null for matrices not built on a charge basis.
struct HermitianMatrix {
    Eigen::MatrixXcd values;
    std::shared_ptr<const ChargeBasis> basis;
};

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending, E_J
    Eigen::MatrixXcd eigenvectors; // columns over the basis
    int n_levels = 0;
    std::vector<int> near_degenerate; // l with |E_{l+1} − E_l| < 1e-10
    std::shared_ptr<const ChargeBasis> basis;
};

struct TransitionFrequencies {
    double omega1 = 0.0; // (E₁ − E₀)/ħ
    double omega2 = 0.0; // (E₂ − E₀)/ħ
    double omega3 = 0.0; // (E₂ − E₁)/ħ
};

inline HermitianMatrix build_hamiltonian(const CircuitParams& p, const BasisTruncation& trunc) {
    p.validate();
    auto basis = std::make_shared<const ChargeBasis>(trunc);
    const int d = basis->dim();
    const double ec = 1.0 / p.ej_over_ec;
    const double kp = 2.0 * ec, km = 2.0 * ec / (1.0 + 2.0 * p.alpha);
    const cplx hop_up = -0.5 * p.alpha * std::polar(1.0, units::two_pi * p.f); // ⟨n_m+2|H|n_m⟩

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const auto [np, nm] = basis->state(j);
        H(j, j) = kp * np * np + km * nm * nm + 2.0 + p.alpha;
        // −2 cos φ_p cos φ_m
        for (int sp : {-1, 1})
            for (int sm : {-1, 1})
                if (int i = basis->index(np + sp, nm + sm); i >= 0) H(i, j) += -0.5;
        // −α cos(2πf + 2φ_m)
        if (int i = basis->index(np, nm + 2); i >= 0) H(i, j) += hop_up;
        if (int i = basis->index(np, nm - 2); i >= 0) H(i, j) += std::conj(hop_up);
    }
    return {std::move(H), std::move(basis)};
}

namespace detail {

inline void require_hermitian(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols() || H.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (max |H - H^dagger| = " << asym << ")";
        throw std::invalid_argument(os.str());
    }
}

// Unitary onto a basis where charge-basis operators become real symmetric. The
// Hamiltonian and current operator both commute with the antiunitary map
// ψ(n_p, n_m) → ψ*(n_p, −n_m); its invariant combinations are
// (|n_m⟩ + |−n_m⟩)/√2 and i(|n_m⟩ − |−n_m⟩)/√2.
inline Eigen::SparseMatrix<cplx> reflection_real_basis(const ChargeBasis& b) {
    const int d = b.dim();
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(2 * d));
    const double r = std::sqrt(0.5);
    int col = 0;
    for (int i = 0; i < d; ++i) {
        const auto [np, nm] = b.state(i);
        if (nm == 0) {
            trips.emplace_back(i, col++, 1.0);
        } else if (nm > 0) {
            const int k = b.index(np, -nm);
            trips.emplace_back(i, col, r);
            trips.emplace_back(k, col++, r);
            trips.emplace_back(i, col, cplx(0, r));
            trips.emplace_back(k, col++, cplx(0, -r));
        }
    }
    Eigen::SparseMatrix<cplx> U(d, d);
    U.setFromTriplets(trips.begin(), trips.end());
    return U;
}

} // namespace detail

inline Spectrum solve_spectrum(const HermitianMatrix& H, int n_levels) {
    detail::require_hermitian(H.values);
    const int d = static_cast<int>(H.values.rows());
    if (n_levels < 1 || n_levels > d) throw std::invalid_argument("n_levels out of range");

    Spectrum s;
    s.n_levels = n_levels;
    s.basis = H.basis;

    bool solved = false;
    if (H.basis) {
        const auto U = detail::reflection_real_basis(*H.basis);
        const Eigen::MatrixXcd HU = H.values * U;
        const Eigen::MatrixXcd Hr = U.adjoint() * HU;
        if (Hr.imag().cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, Hr.cwiseAbs().maxCoeff())) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hr.real());
            if (es.info() != Eigen::Success)
                throw NumericalFailure("eigen-solver failed on real symmetric block of dimension " +
                                       std::to_string(d));
            s.eigenvalues = es.eigenvalues().head(n_levels);
            s.eigenvectors = U * es.eigenvectors().leftCols(n_levels).cast<cplx>();
            solved = true;
        }
    }
    if (!solved) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.values);
        if (es.info() != Eigen::Success)
            throw NumericalFailure("eigen-solver failed on Hermitian matrix of dimension " + std::to_string(d));
        s.eigenvalues = es.eigenvalues().head(n_levels);
        s.eigenvectors = es.eigenvectors().leftCols(n_levels);
    }
    if (!s.eigenvalues.allFinite()) throw NumericalFailure("eigen-solver returned non-finite eigenvalues");
    for (int l = 0; l + 1 < n_levels; ++l)
        if (s.eigenvalues(l + 1) - s.eigenvalues(l) < 1e-10) s.near_degenerate.push_back(l);
    return s;
}

// ej_scale = 1 keeps the result in E_J/ħ; pass CircuitParams::ej_scale for rad/s.
inline TransitionFrequencies transition_frequencies(const Spectrum& s, double ej_scale = 1.0) {
    if (s.n_levels < 3) throw std::invalid_argument("transition frequencies need at least 3 levels");
    const auto& E = s.eigenvalues;
    return {(E(1) - E(0)) * ej_scale, (E(2) - E(0)) * ej_scale, (E(2) - E(1)) * ej_scale};
}

struct LevelRow {
    double f = 0.0;
    std::vector<double> energies; // E₀…E₅ in E_J
    bool degenerate = false;
    std::string error;            // non-empty if this row failed
};

inline std::vector<LevelRow> sweep_levels(CircuitParams params, const std::vector<double>& f_grid,
                                          const BasisTruncation& trunc, int jobs = 1, int n_levels = 6) {
    if (f_grid.empty()) throw std::invalid_argument("flux grid is empty");
    std::vector<LevelRow> rows(f_grid.size());
    parallel_for(f_grid.size(), jobs, [&](std::size_t i) {
        LevelRow& row = rows[i];
        row.f = f_grid[i];
        try {
            CircuitParams p = params;
            p.f = f_grid[i];
            const auto s = solve_spectrum(build_hamiltonian(p, trunc), n_levels);
            row.energies.assign(s.eigenvalues.data(), s.eigenvalues.data() + n_levels);
            row.degenerate = !s.near_degenerate.empty();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

} // namespace sfqc
