// regime.hpp — EIT / ATS labelling from the thresholds Ω_W and Ω_M.
//
//   Ω_W    = |γ11 − γ22|/2                  weak (|Ω_D| < Ω_W) vs strong driving
//   Ω_M01  = γ22 √(γ22/(γ11 + 2γ22))        maximum vs minimum at the 01 window centre
//   Ω_M02  = γ11 √(γ11/(γ22 + 2γ11))        same for the 02 window
//
// Window 01 is EIT when γ11 > 2γ22 and Ω_M01 < |Ω_D| < Ω_W; ATS when the centre is a
// minimum and |Ω_D| > Ω_W. Window 02 mirrors this with γ11 ↔ γ22. The inequalities are
// exact only for Δ = 0, γ12 = γ21 = 0; otherwise the report is flagged approximate.
#pragma once

#include <sfqc/linear_response.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace sfqc {

struct Thresholds {
    double omega_w = 0.0;
    double omega_m01 = 0.0;
    double omega_m02 = 0.0;
};

inline Thresholds thresholds(const DampingRates& r) {
    if (!(r.g11 > 0.0) || !(r.g22 > 0.0)) throw std::invalid_argument("thresholds need positive gamma11, gamma22");
    return {0.5 * std::abs(r.g11 - r.g22), r.g22 * std::sqrt(r.g22 / (r.g11 + 2.0 * r.g22)),
            r.g11 * std::sqrt(r.g11 / (r.g22 + 2.0 * r.g11))};
}

enum class RegimeLabel { EIT, ATS, NEITHER, BIFURCATION };
enum class DrivingRegime { weak, strong };
enum class ExtremumRegime { maximum, minimum };

inline const char* to_string(RegimeLabel l) {
    switch (l) {
    case RegimeLabel::EIT: return "EIT";
    case RegimeLabel::ATS: return "ATS";
    case RegimeLabel::NEITHER: return "NEITHER";
    case RegimeLabel::BIFURCATION: return "BIFURCATION";
    }
    return "?";
}
inline const char* to_string(DrivingRegime d) { return d == DrivingRegime::weak ? "weak" : "strong"; }
inline const char* to_string(ExtremumRegime e) { return e == ExtremumRegime::maximum ? "maximum" : "minimum"; }
inline const char* to_string(Window w) { return w == Window::w01 ? "01" : "02"; }

struct RegimeReport {
    Window window = Window::w01;
    RegimeLabel label = RegimeLabel::NEITHER;
    double omega_w = 0.0;
    double omega_m = 0.0;
    DrivingRegime driving_regime = DrivingRegime::weak;
    ExtremumRegime extremum_regime = ExtremumRegime::maximum;
    bool approximate = false;
};

// EIT rate condition for a window: γ11 > 2γ22 (01) or γ22 > 2γ11 (02).
inline bool eit_rate_condition(Window window, const DampingRates& r) {
    return window == Window::w01 ? r.g11 > 2.0 * r.g22 : r.g22 > 2.0 * r.g11;
}

inline RegimeReport classify(Window window, const DampingRates& r, double omega_d_mag, double detuning = 0.0) {
    if (!(omega_d_mag >= 0.0)) throw std::invalid_argument("Rabi frequency must be non-negative");
    const auto t = thresholds(r);
    RegimeReport rep;
    rep.window = window;
    rep.omega_w = t.omega_w;
    rep.omega_m = window == Window::w01 ? t.omega_m01 : t.omega_m02;
    rep.approximate = detuning != 0.0 || r.g12 != 0.0 || r.g21 != 0.0;
    rep.driving_regime = omega_d_mag < t.omega_w ? DrivingRegime::weak : DrivingRegime::strong;
    rep.extremum_regime = omega_d_mag > rep.omega_m ? ExtremumRegime::minimum : ExtremumRegime::maximum;

    if (std::abs(omega_d_mag - t.omega_w) <= 1e-6 * t.omega_w) {
        rep.label = RegimeLabel::BIFURCATION;
        return rep;
    }
    if (eit_rate_condition(window, r)) {
        if (omega_d_mag > t.omega_w)
            rep.label = RegimeLabel::ATS;
        else if (omega_d_mag > rep.omega_m)
            rep.label = RegimeLabel::EIT;
        else
            rep.label = RegimeLabel::NEITHER;
    } else {
        rep.label = omega_d_mag > rep.omega_m ? RegimeLabel::ATS : RegimeLabel::NEITHER;
    }
    return rep;
}

struct CurvatureRow {
    double omega_d_mag = 0.0;
    RegimeLabel label = RegimeLabel::NEITHER;
    bool classifier_minimum = false;
    bool numeric_minimum = false;
    double curvature = 0.0;       // second difference of Im χ at the window centre
    bool near_threshold = false;  // within ±5% of Ω_W or Ω_M
    bool agree = false;
};

// Brute-force check of the classifier: Im χ at the window centre is compared with its
// neighbours at ±h. Uses only γ11, γ22 of the context (Δ and γ12, γ21 set to zero).
inline std::vector<CurvatureRow> verify_against_spectrum(Window window, const ResponseContext& ctx,
                                                         const std::vector<double>& omega_d_grid) {
    DampingRates r{ctx.rates.g11, ctx.rates.g22, 0.0, 0.0};
    const auto t = thresholds(r);
    const double om = window == Window::w01 ? t.omega_m01 : t.omega_m02;
    const double h = 1e-3 * std::min(r.g11, r.g22);
    std::vector<CurvatureRow> out;
    out.reserve(omega_d_grid.size());
    for (double od : omega_d_grid) {
        DriveConfig drive;
        drive.omega_d_mag = od;
        auto im = [&](double d) {
            return window == Window::w01 ? chi01(d, r, drive, 1.0).imag() : chi02(d, r, drive, 1.0).imag();
        };
        CurvatureRow row;
        row.omega_d_mag = od;
        const auto rep = classify(window, r, od);
        row.label = rep.label;
        row.classifier_minimum = rep.extremum_regime == ExtremumRegime::minimum;
        const double c0 = im(0.0), cp = im(h), cm = im(-h);
        row.curvature = (cp - 2.0 * c0 + cm) / (h * h);
        row.numeric_minimum = c0 < cp && c0 < cm;
        row.near_threshold = std::abs(od - t.omega_w) <= 0.05 * t.omega_w || std::abs(od - om) <= 0.05 * om;
        const bool label_minimum = rep.label == RegimeLabel::EIT || rep.label == RegimeLabel::ATS;
        row.agree = row.classifier_minimum == row.numeric_minimum &&
                    (rep.label == RegimeLabel::BIFURCATION || label_minimum == row.numeric_minimum);
        out.push_back(row);
    }
    return out;
}

} // namespace sfqc
