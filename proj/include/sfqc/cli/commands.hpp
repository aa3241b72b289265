// commands.hpp — subcommands and figure recipes. Every command writes CSV files and
// reports row-level failures instead of aborting the whole sweep.
#pragma once

#include <sfqc/cli/config.hpp>
#include <sfqc/cli/csv.hpp>
#include <sfqc/regime.hpp>
#include <sfqc/timedomain_oracle.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace sfqc::cli {

struct RunOptions {
    int jobs = 1;
    std::filesystem::path out_dir = ".";
};

struct CommandOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> failures; // one entry per failed row / check
};

// Device states keyed by circuit point, shared between curves of one run.
class DeviceCache {
public:
    const DeviceState& get(const RunConfig& c) {
        const Key key{c.alpha, c.ej_over_ec, c.f, c.n_p, c.n_m};
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        const auto op = c.operating_point();
        DeviceState d = analyze_device(op.circuit, op.trunc);
        std::lock_guard lock(mutex_);
        return cache_.emplace(key, std::move(d)).first->second;
    }

private:
    using Key = std::tuple<double, double, double, int, int>;
    std::mutex mutex_;
    std::map<Key, DeviceState> cache_;
};

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline nlohmann::json constants_json(const RunConfig& c) {
    return {{"kB_over_h_GHz_per_K", units::kB_over_h_GHz_per_K},
            {"ej_scale_rad_per_s", c.ej_scale()},
            {"eta_convention", "eta = 2*pi*beta/I_s^2"},
            {"chi_unit", "I0^2/(2*pi*GHz)"},
            {"rate_unit", "gamma/(2*pi) in MHz"},
            {"energy_unit", "E_J"},
            {"current_unit", "I0"}};
}

inline nlohmann::json metadata(const std::string& command, const std::vector<std::pair<std::string, RunConfig>>& curves) {
    nlohmann::json cfgs = nlohmann::json::array();
    for (const auto& [label, cfg] : curves) cfgs.push_back({{"label", label}, {"config", to_json(cfg)}});
    return {{"command", command}, {"curves", cfgs}, {"constants", constants_json(curves.front().second)}};
}

// ---- grids ---------------------------------------------------------------------------

inline std::vector<double> grid_or(const RunConfig& c, std::vector<double> fallback) {
    return c.sweep.has_grid() ? c.sweep.grid() : std::move(fallback);
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return g;
}

inline std::vector<double> default_flux_grid() { return linspace(0.45, 0.55, 201); }

// Applies the sweep variable x to a copy of the configuration.
inline RunConfig at_axis(RunConfig c, const std::string& axis, double x) {
    if (axis == "f") c.f = x;
    else if (axis == "T_mK") c.T_mK = x;
    else if (axis == "rabi_MHz") c.rabi_MHz = x;
    else throw ConfigError("sweep.axis", 0, "axis '" + axis + "' is not valid for this command");
    validate(c);
    return c;
}

// ---- tables ---------------------------------------------------------------------------

inline CsvTable levels_table(const RunConfig& c, DeviceCache& cache, int jobs, CommandOutcome& out) {
    if (!c.sweep.axis.empty() && c.sweep.axis != "f") throw ConfigError("sweep.axis", 0, "spectrum sweeps f only");
    const auto grid = grid_or(c, default_flux_grid());
    CsvTable t;
    t.columns = {"f", "E0", "E1", "E2", "E3", "E4", "E5", "omega1_GHz", "omega2_GHz", "omega3_GHz", "error"};
    std::vector<std::vector<Cell>> rows(grid.size());
    std::vector<std::string> errs(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        std::vector<Cell> row{grid[i]};
        try {
            const auto& d = cache.get(at_axis(c, "f", grid[i]));
            for (int l = 0; l < 6; ++l) row.emplace_back(d.spectrum.eigenvalues(l));
            row.emplace_back(units::to_GHz(d.freqs.omega1, c.ej_scale()));
            row.emplace_back(units::to_GHz(d.freqs.omega2, c.ej_scale()));
            row.emplace_back(units::to_GHz(d.freqs.omega3, c.ej_scale()));
            row.emplace_back(d.spectrum.near_degenerate.empty() ? "" : "near-degenerate levels");
        } catch (const std::exception& e) {
            row.resize(1);
            for (int k = 0; k < 9; ++k) row.emplace_back(nan);
            row.emplace_back(e.what());
            errs[i] = e.what();
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));
    for (std::size_t i = 0; i < errs.size(); ++i)
        if (!errs[i].empty()) out.failures.push_back("f=" + format_number(grid[i]) + ": " + errs[i]);
    return t;
}

enum class CurrentColumns { moduli, diagonal, all };

inline CsvTable currents_table(const RunConfig& c, CurrentColumns which, DeviceCache& cache, int jobs,
                               CommandOutcome& out) {
    if (!c.sweep.axis.empty() && c.sweep.axis != "f") throw ConfigError("sweep.axis", 0, "currents sweep f only");
    const auto grid = grid_or(c, default_flux_grid());
    CsvTable t;
    t.columns = {"f"};
    if (which != CurrentColumns::diagonal) t.columns.insert(t.columns.end(), {"abs_I01", "abs_I02", "abs_I12"});
    if (which != CurrentColumns::moduli) t.columns.insert(t.columns.end(), {"I00", "I11", "I22"});
    t.columns.push_back("error");
    std::vector<std::vector<Cell>> rows(grid.size());
    std::vector<std::string> errs(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        std::vector<Cell> row{grid[i]};
        try {
            const auto& I = cache.get(at_axis(c, "f", grid[i])).currents;
            if (which != CurrentColumns::diagonal)
                row.insert(row.end(), {std::abs(I(0, 1)), std::abs(I(0, 2)), std::abs(I(1, 2))});
            if (which != CurrentColumns::moduli) row.insert(row.end(), {I(0, 0), I(1, 1), I(2, 2)});
            row.emplace_back("");
        } catch (const std::exception& e) {
            row.resize(1);
            while (row.size() + 1 < t.columns.size()) row.emplace_back(nan);
            row.emplace_back(e.what());
            errs[i] = e.what();
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));
    for (std::size_t i = 0; i < errs.size(); ++i)
        if (!errs[i].empty()) out.failures.push_back("f=" + format_number(grid[i]) + ": " + errs[i]);
    return t;
}

struct RateSample {
    DampingRates rates;
    std::string error;
};

inline std::vector<RateSample> rate_samples(const RunConfig& c, const std::string& axis, const std::vector<double>& grid,
                                            DeviceCache& cache, int jobs) {
    std::vector<RateSample> out(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        try {
            const RunConfig ci = at_axis(c, axis, grid[i]);
            const auto op = ci.operating_point();
            const auto& d = cache.get(ci);
            out[i].rates = damping_rates(d.currents, d.freqs, op.drive, make_bath(op));
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

inline std::string rate_axis(const RunConfig& c) { return c.sweep.axis.empty() ? "f" : c.sweep.axis; }

inline std::vector<double> rate_grid(const RunConfig& c) {
    const auto axis = rate_axis(c);
    if (c.sweep.has_grid()) return c.sweep.grid();
    if (axis == "f") return default_flux_grid();
    if (axis == "T_mK") return linspace(0.0, 100.0, 101);
    return linspace(0.0, 40.0, 81);
}

// One column per (curve, rate) in `which` ⊂ {g11, g22, g12, g21}.
inline CsvTable rates_table(const std::vector<std::pair<std::string, RunConfig>>& curves,
                            const std::vector<std::string>& which, DeviceCache& cache, int jobs, CommandOutcome& out) {
    const RunConfig& first = curves.front().second;
    const auto axis = rate_axis(first);
    const auto grid = rate_grid(first);
    CsvTable t;
    t.columns = {axis};
    for (const auto& [label, cfg] : curves)
        for (const auto& w : which) t.columns.push_back("gamma" + w.substr(1) + "_MHz" + (label.empty() ? "" : "_" + label));
    t.columns.push_back("error");
    std::vector<std::vector<RateSample>> samples;
    for (const auto& [label, cfg] : curves) samples.push_back(rate_samples(cfg, axis, grid, cache, jobs));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        std::string err;
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const auto& s = samples[k][i];
            const double scale = curves[k].second.ej_scale();
            for (const auto& w : which) {
                const double g = w == "g11" ? s.rates.g11 : w == "g22" ? s.rates.g22 : w == "g12" ? s.rates.g12 : s.rates.g21;
                row.emplace_back(s.error.empty() ? units::to_MHz(g, scale) : nan);
            }
            if (!s.error.empty() && err.empty()) err = s.error;
        }
        row.emplace_back(err);
        if (!err.empty()) out.failures.push_back(axis + "=" + format_number(grid[i]) + ": " + err);
        t.add_row(std::move(row));
    }
    return t;
}

// Probe offsets are measured from the bare transitions: ω_P − ω₁ (window 01) and
// ω_P − ω₂ (window 02), so curves with different Δ share one frequency axis.
inline std::vector<double> probe_grid(const RunConfig& c, double half_width_MHz) {
    if (!c.sweep.axis.empty() && c.sweep.axis != "probe_MHz")
        throw ConfigError("sweep.axis", 0, "susceptibility sweeps probe_MHz only");
    return grid_or(c, linspace(-half_width_MHz, half_width_MHz, 401));
}

inline std::vector<Window> windows_of(const RunConfig& c) {
    if (c.sweep.window == "both") return {Window::w01, Window::w02};
    return {c.sweep.window == "02" ? Window::w02 : Window::w01};
}

enum class ResponseParts { full, real, imag };

struct ResponseCurve {
    ResponseContext ctx;
    std::vector<std::optional<ResonancePair>> pairs; // per window
};

inline ResponseCurve response_curve(const RunConfig& c, DeviceCache& cache) {
    const auto op = c.operating_point();
    const auto& d = cache.get(c);
    ResponseCurve rc;
    rc.ctx.freqs = d.freqs;
    rc.ctx.i01_abs = std::abs(d.currents(0, 1));
    rc.ctx.i02_abs = std::abs(d.currents(0, 2));
    rc.ctx.drive = op.drive;
    rc.ctx.rates = damping_rates(d.currents, d.freqs, op.drive, make_bath(op));
    for (Window w : {Window::w01, Window::w02}) {
        try {
            rc.pairs.emplace_back(decompose(w, rc.ctx.rates, rc.ctx.drive, w == Window::w01 ? rc.ctx.i01_abs : rc.ctx.i02_abs));
        } catch (const BifurcationError&) {
            rc.pairs.emplace_back(std::nullopt);
        }
    }
    return rc;
}

// decomposition = true adds R₊, R₋ of the probed window (single curve only).
inline CsvTable response_table(const std::vector<std::pair<std::string, RunConfig>>& curves, double half_width_MHz,
                               ResponseParts parts, bool decomposition, bool components, DeviceCache& cache) {
    const RunConfig& first = curves.front().second;
    const auto grid = probe_grid(first, half_width_MHz);
    const auto windows = windows_of(first);
    std::vector<ResponseCurve> rcs;
    for (const auto& [label, cfg] : curves) rcs.push_back(response_curve(cfg, cache));

    CsvTable t;
    t.columns = {"window", "probe_offset_MHz", "omega_p_GHz"};
    auto add_cols = [&](const std::string& name) {
        if (parts != ResponseParts::imag) t.columns.push_back("re_" + name);
        if (parts != ResponseParts::real) t.columns.push_back("im_" + name);
    };
    for (const auto& [label, cfg] : curves) {
        const std::string sfx = label.empty() ? "" : "_" + label;
        add_cols("chi_q" + sfx);
        if (components) {
            add_cols("chi01" + sfx);
            add_cols("chi02" + sfx);
        }
        if (decomposition) {
            add_cols("r_plus" + sfx);
            add_cols("r_minus" + sfx);
        }
    }
    auto push = [&](std::vector<Cell>& row, cplx z) {
        const double k = units::chi_to_per_GHz(1.0, first.ej_scale());
        if (parts != ResponseParts::imag) row.emplace_back(z.real() * k);
        if (parts != ResponseParts::real) row.emplace_back(z.imag() * k);
    };
    for (Window w : windows) {
        for (double x : grid) {
            const auto& f0 = rcs.front().ctx.freqs;
            const double centre = w == Window::w01 ? f0.omega1 : f0.omega2;
            const double wp = centre + units::from_MHz(x, first.ej_scale());
            std::vector<Cell> row{to_string(w), x, units::to_GHz(wp, first.ej_scale())};
            for (const auto& rc : rcs) {
                const auto p = chi_q(wp, rc.ctx);
                push(row, p.chi_q);
                if (components) {
                    push(row, p.chi01);
                    push(row, p.chi02);
                }
                if (decomposition) {
                    const auto& pair = rc.pairs[w == Window::w01 ? 0 : 1];
                    const double d = w == Window::w01 ? p.delta1 : p.delta2;
                    push(row, pair ? pair->r_plus(d) : cplx(nan, nan));
                    push(row, pair ? pair->r_minus(d) : cplx(nan, nan));
                }
            }
            t.add_row(std::move(row));
        }
    }
    return t;
}

// ---- classification -------------------------------------------------------------------

struct ClassifyRow {
    double x = 0.0;
    DampingRates rates;
    std::vector<RegimeReport> reports;
    std::string error;
};

inline std::vector<ClassifyRow> classify_rows(const RunConfig& c, DeviceCache& cache, int jobs) {
    const std::string axis = c.sweep.axis.empty() ? "rabi_MHz" : c.sweep.axis;
    const auto grid = c.sweep.has_grid() ? c.sweep.grid() : std::vector<double>{c.rabi_MHz};
    std::vector<ClassifyRow> rows(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        rows[i].x = grid[i];
        try {
            const RunConfig ci = at_axis(c, axis, grid[i]);
            const auto op = ci.operating_point();
            const auto& d = cache.get(ci);
            rows[i].rates = damping_rates(d.currents, d.freqs, op.drive, make_bath(op));
            for (Window w : windows_of(c))
                rows[i].reports.push_back(classify(w, rows[i].rates, op.drive.omega_d_mag, op.drive.delta));
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });
    return rows;
}

// ---- time-domain cross-check ------------------------------------------------------------

struct OracleCase {
    std::string set;  // figure parameter set
    RunConfig config;
    Window window = Window::w01;
    int offset = 0;   // probe at centre + offset·s, s = max(|Re δ₊|, min γ)
};

// 30 points over the figure parameter sets: f = 0.5 probes window 01 (χ₀₂ ≡ 0 there),
// f = 0.525 probes both windows.
inline std::vector<OracleCase> oracle_suite(const RunConfig& base) {
    struct Set {
        const char* name;
        double f, rabi, T, delta;
    };
    const std::vector<Set> sets{
        {"fig5-i", 0.5, 0.37, 25, 0},    {"fig5-ii", 0.5, 0.37, 25, 0.37}, {"fig5-iii", 0.5, 0.37, 50, 0},
        {"fig6-i", 0.5, 40, 25, 0},      {"fig6-ii", 0.5, 40, 25, 20},     {"fig6-iii", 0.5, 40, 50, 0},
        {"fig7-i", 0.525, 1.4, 25, 0},   {"fig7-ii", 0.525, 1.4, 25, 1.4}, {"fig7-iii", 0.525, 1.4, 50, 0},
        {"fig8-i", 0.525, 40, 25, 0},    {"fig8-ii", 0.525, 40, 25, 20},   {"fig8-iii", 0.525, 40, 50, 0},
    };
    std::vector<OracleCase> out;
    for (const auto& s : sets) {
        RunConfig c = base;
        c.sweep = SweepSpec{};
        c.f = s.f;
        c.rabi_MHz = s.rabi;
        c.T_mK = s.T;
        c.detuning_MHz = s.delta;
        if (s.f == 0.5) {
            out.push_back({s.name, c, Window::w01, 0});
            out.push_back({s.name, c, Window::w01, 1});
        } else {
            out.push_back({s.name, c, Window::w01, 0});
            out.push_back({s.name, c, Window::w02, 0});
            out.push_back({s.name, c, Window::w02, -1});
        }
    }
    return out;
}

struct OracleResult {
    double omega_p = 0.0;
    cplx analytic, oracle;
    double rel_error = 0.0;
    std::string error;
};

inline OracleResult run_oracle_case(const OracleCase& oc, DeviceCache& cache) {
    OracleResult r;
    try {
        const auto ctx = response_curve(oc.config, cache).ctx;
        const auto [dp, dm] = d1_roots(ctx.rates, ctx.drive);
        const double s = std::max(std::abs(dp.real()), std::min(ctx.rates.g11, ctx.rates.g22));
        const double centre = oc.window == Window::w01 ? ctx.freqs.omega1 : ctx.omega_prime();
        r.omega_p = centre + oc.offset * s;
        r.analytic = chi_q(r.omega_p, ctx).chi_q;
        r.oracle = oracle_susceptibility(ctx, r.omega_p).chi;
        r.rel_error = std::abs(r.oracle - r.analytic) / std::abs(r.analytic);
    } catch (const std::exception& e) {
        r.error = e.what();
        r.rel_error = nan;
    }
    return r;
}

// ---- figures ---------------------------------------------------------------------------

enum class PanelKind { levels, current_moduli, current_diagonal, rates, response };

struct Panel {
    std::string name;
    PanelKind kind = PanelKind::levels;
    std::vector<std::pair<std::string, RunConfig>> curves;
    std::vector<std::string> rates;    // for PanelKind::rates
    double half_width_MHz = 0.0;       // for PanelKind::response
    ResponseParts parts = ResponseParts::full;
    bool decomposition = false;
};

inline Panel make_panel(std::string name, PanelKind kind, std::vector<std::pair<std::string, RunConfig>> curves = {}) {
    Panel p;
    p.name = std::move(name);
    p.kind = kind;
    p.curves = std::move(curves);
    return p;
}

inline std::string mk_label(double v, const char* unit) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (char& ch : s)
        if (ch == '.') ch = 'p';
    return s + unit;
}

inline std::vector<Panel> figure_recipe(const std::string& fig, const RunConfig& base) {
    auto cfg = [&](auto&& mutate) {
        RunConfig c = base;
        c.sweep = SweepSpec{};
        mutate(c);
        validate(c);
        return c;
    };
    std::vector<Panel> panels;
    if (fig == "fig2") {
        const auto c = cfg([](RunConfig& c) {
            c.sweep.axis = "f";
            c.sweep.start = 0.45;
            c.sweep.stop = 0.55;
            c.sweep.points = 201;
        });
        panels.push_back(make_panel("fig2a", PanelKind::levels, {{"", c}}));
        panels.push_back(make_panel("fig2b", PanelKind::current_moduli, {{"", c}}));
        panels.push_back(make_panel("fig2c", PanelKind::current_diagonal, {{"", c}}));
    } else if (fig == "fig4") {
        Panel a = make_panel("fig4a", PanelKind::rates);
        for (double T : {0.0, 25.0, 50.0})
            a.curves.push_back({mk_label(T, "mK"), cfg([&](RunConfig& c) {
                                    c.T_mK = T;
                                    c.rabi_MHz = 0;
                                    c.detuning_MHz = 0;
                                    c.sweep.axis = "f";
                                    c.sweep.start = 0.45;
                                    c.sweep.stop = 0.55;
                                    c.sweep.points = 201;
                                })});
        a.rates = {"g11", "g22"};
        Panel b = make_panel("fig4b", PanelKind::rates);
        for (double f : {0.5, 0.51, 0.525})
            b.curves.push_back({"f" + mk_label(f, ""), cfg([&](RunConfig& c) {
                                    c.f = f;
                                    c.rabi_MHz = 0;
                                    c.detuning_MHz = 0;
                                    c.sweep.axis = "T_mK";
                                    c.sweep.start = 0;
                                    c.sweep.stop = 100;
                                    c.sweep.points = 101;
                                })});
        b.rates = {"g11", "g22"};
        panels.push_back(a);
        panels.push_back(b);
        const char* names[] = {"fig4c", "fig4d", "fig4e", "fig4f"};
        const char* which[] = {"g11", "g22", "g12", "g21"};
        for (int k = 0; k < 4; ++k) {
            Panel p = make_panel(names[k], PanelKind::rates);
            for (double f : {0.5, 0.51, 0.525})
                p.curves.push_back({"f" + mk_label(f, ""), cfg([&](RunConfig& c) {
                                        c.f = f;
                                        c.T_mK = 25;
                                        c.detuning_MHz = 0;
                                        c.sweep.axis = "rabi_MHz";
                                        c.sweep.start = 0;
                                        c.sweep.stop = 40;
                                        c.sweep.points = 81;
                                    })});
            p.rates = {which[k]};
            panels.push_back(p);
        }
    } else if (fig == "fig5" || fig == "fig6" || fig == "fig7" || fig == "fig8") {
        const bool f05 = fig == "fig5" || fig == "fig6";
        const bool strong = fig == "fig6" || fig == "fig8";
        const double f = f05 ? 0.5 : 0.525;
        const double rabi = strong ? 40.0 : (fig == "fig5" ? 0.37 : 1.4);
        const double alt_delta = strong ? 20.0 : rabi; // curve (ii)
        const double hw = strong ? 100.0 : 10.0;
        const std::string window = f05 ? "01" : "both";
        auto curve = [&](double T, double delta) {
            return cfg([&](RunConfig& c) {
                c.f = f;
                c.rabi_MHz = rabi;
                c.T_mK = T;
                c.detuning_MHz = delta;
                c.sweep.axis = "probe_MHz";
                c.sweep.start = -hw;
                c.sweep.stop = hw;
                c.sweep.points = 401;
                c.sweep.window = window;
            });
        };
        const auto i = curve(25, 0), ii = curve(25, alt_delta), iii = curve(50, 0);
        Panel a = make_panel(fig + "a", PanelKind::response, {{"", i}});
        a.half_width_MHz = hw;
        a.parts = ResponseParts::real;
        a.decomposition = true;
        Panel b = a;
        b.name = fig + "b";
        b.parts = ResponseParts::imag;
        Panel c = make_panel(fig + "c", PanelKind::response, {{"i", i}, {"ii", ii}, {"iii", iii}});
        c.half_width_MHz = hw;
        c.parts = ResponseParts::real;
        Panel d = c;
        d.name = fig + "d";
        d.parts = ResponseParts::imag;
        panels = {a, b, c, d};
    } else {
        throw ConfigError("", 0, "unknown figure '" + fig + "' (expected fig2, fig4, fig5, fig6, fig7 or fig8)");
    }
    return panels;
}

inline CsvTable render_panel(const Panel& p, DeviceCache& cache, int jobs, CommandOutcome& out) {
    CsvTable t;
    const RunConfig& c = p.curves.front().second;
    switch (p.kind) {
    case PanelKind::levels: t = levels_table(c, cache, jobs, out); break;
    case PanelKind::current_moduli: t = currents_table(c, CurrentColumns::moduli, cache, jobs, out); break;
    case PanelKind::current_diagonal: t = currents_table(c, CurrentColumns::diagonal, cache, jobs, out); break;
    case PanelKind::rates: t = rates_table(p.curves, p.rates, cache, jobs, out); break;
    case PanelKind::response:
        t = response_table(p.curves, p.half_width_MHz, p.parts, p.decomposition, false, cache);
        break;
    }
    t.metadata = metadata("reproduce " + p.name, p.curves);
    return t;
}

// ---- dispatch --------------------------------------------------------------------------

inline std::filesystem::path output_path(const RunConfig& c, const RunOptions& o, const std::string& name,
                                         const char* ext = ".csv") {
    return o.out_dir / (c.prefix + name + ext);
}

inline CommandOutcome run_command(const std::string& cmd, const std::vector<std::string>& args, const RunConfig& cfg,
                                  const RunOptions& opt) {
    CommandOutcome out;
    DeviceCache cache;
    auto emit = [&](const std::string& name, CsvTable t) {
        const auto path = output_path(cfg, opt, name);
        write_csv(path, t);
        out.files.push_back(path);
    };
    const std::vector<std::pair<std::string, RunConfig>> self{{"", cfg}};

    if (cmd == "spectrum") {
        auto t = levels_table(cfg, cache, opt.jobs, out);
        t.metadata = metadata(cmd, self);
        emit("spectrum", std::move(t));
    } else if (cmd == "currents") {
        auto t = currents_table(cfg, CurrentColumns::all, cache, opt.jobs, out);
        t.metadata = metadata(cmd, self);
        emit("currents", std::move(t));
    } else if (cmd == "rates") {
        if (cfg.sweep.axis == "probe_MHz") throw ConfigError("sweep.axis", 0, "rates sweep f, T_mK or rabi_MHz");
        auto t = rates_table(self, {"g11", "g22", "g12", "g21"}, cache, opt.jobs, out);
        t.metadata = metadata(cmd, self);
        emit("rates", std::move(t));
    } else if (cmd == "susceptibility") {
        const auto ctx = response_curve(cfg, cache).ctx;
        // default span: a few resonance widths plus the drive splitting
        const double span = 4.0 * (ctx.rates.g11 + ctx.rates.g22) + 2.0 * ctx.drive.omega_d_mag + std::abs(ctx.drive.delta);
        const double hw = std::ceil(units::to_MHz(span, cfg.ej_scale()));
        auto t = response_table(self, hw, ResponseParts::full, true, true, cache);
        t.metadata = metadata(cmd, self);
        emit("susceptibility", std::move(t));
    } else if (cmd == "classify") {
        const auto rows = classify_rows(cfg, cache, opt.jobs);
        const std::string axis = cfg.sweep.axis.empty() ? "rabi_MHz" : cfg.sweep.axis;
        CsvTable t;
        t.columns = {axis,          "window",   "gamma11_MHz", "gamma22_MHz", "omega_w_MHz", "omega_m_MHz",
                     "label",       "driving",  "extremum",    "approximate", "error"};
        nlohmann::json reports = nlohmann::json::array();
        for (const auto& r : rows) {
            if (!r.error.empty()) {
                t.add_row({r.x, "", nan, nan, nan, nan, "", "", "", "", r.error});
                out.failures.push_back(axis + "=" + format_number(r.x) + ": " + r.error);
                reports.push_back({{axis, r.x}, {"error", r.error}});
                continue;
            }
            for (const auto& rep : r.reports) {
                const double k = cfg.ej_scale();
                t.add_row({r.x, to_string(rep.window), units::to_MHz(r.rates.g11, k), units::to_MHz(r.rates.g22, k),
                           units::to_MHz(rep.omega_w, k), units::to_MHz(rep.omega_m, k), to_string(rep.label),
                           to_string(rep.driving_regime), to_string(rep.extremum_regime),
                           rep.approximate ? "yes" : "no", ""});
                reports.push_back({{axis, r.x},
                                   {"window", to_string(rep.window)},
                                   {"label", to_string(rep.label)},
                                   {"omega_w_MHz", units::to_MHz(rep.omega_w, k)},
                                   {"omega_m_MHz", units::to_MHz(rep.omega_m, k)},
                                   {"driving_regime", to_string(rep.driving_regime)},
                                   {"extremum_regime", to_string(rep.extremum_regime)},
                                   {"approximate", rep.approximate}});
            }
        }
        t.metadata = metadata(cmd, self);
        emit("classify", t);
        const auto jpath = output_path(cfg, opt, "classify", ".json");
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream js(jpath, std::ios::binary);
        js << nlohmann::json{{"metadata", t.metadata}, {"reports", reports}}.dump(2) << "\n";
        if (!js) throw std::runtime_error("failed writing " + jpath.string());
        out.files.push_back(jpath);
    } else if (cmd == "oracle-check") {
        const auto suite = oracle_suite(cfg);
        std::vector<OracleResult> res(suite.size());
        parallel_for(suite.size(), opt.jobs, [&](std::size_t i) { res[i] = run_oracle_case(suite[i], cache); });
        CsvTable t;
        t.columns = {"point", "set", "f", "T_mK", "rabi_MHz", "detuning_MHz", "window", "omega_p_GHz",
                     "re_chi_analytic", "im_chi_analytic", "re_chi_oracle", "im_chi_oracle", "rel_error", "error"};
        const double k = units::chi_to_per_GHz(1.0, cfg.ej_scale());
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const auto& c = suite[i].config;
            const auto& r = res[i];
            t.add_row({double(i), suite[i].set, c.f, c.T_mK, c.rabi_MHz, c.detuning_MHz, to_string(suite[i].window),
                       units::to_GHz(r.omega_p, cfg.ej_scale()), r.analytic.real() * k, r.analytic.imag() * k,
                       r.oracle.real() * k, r.oracle.imag() * k, r.rel_error, r.error});
            if (!r.error.empty()) out.failures.push_back("oracle point " + std::to_string(i) + ": " + r.error);
            else if (!(r.rel_error < 1e-2))
                out.failures.push_back("oracle point " + std::to_string(i) + ": relative error " +
                                       format_number(r.rel_error) + " >= 1e-2");
        }
        t.metadata = metadata(cmd, self);
        emit("oracle_check", std::move(t));
    } else if (cmd == "reproduce") {
        if (args.empty()) throw ConfigError("", 0, "reproduce needs a figure name");
        for (const auto& panel : figure_recipe(args.front(), cfg)) emit(panel.name, render_panel(panel, cache, opt.jobs, out));
    } else {
        throw std::invalid_argument("unknown command '" + cmd + "'");
    }
    return out;
}

} // namespace sfqc::cli
