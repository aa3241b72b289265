// sfqc.cpp — command-line front end: config file + overrides → CSV outputs.
#include <sfqc/cli/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

int report(const std::string& cmd, const char* kind, const std::string& message) {
    std::cerr << "sfqc: error: command=" << (cmd.empty() ? "-" : cmd) << " kind=" << kind << " message=\""
              << one_line(message) << "\"\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dressed-qubit susceptibility toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> overrides;
    int jobs = 1;
    std::string out_dir;
    bool print_config = false;
    app.add_option("-c,--config", config_path, "configuration file");
    app.add_option("-s,--set", overrides, "override, e.g. --set circuit.f=0.51 (repeatable)");
    app.add_option("-j,--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    std::string figure;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"spectrum", "lowest six levels and transition frequencies vs flux"},
        {"currents", "loop-current matrix elements vs flux"},
        {"rates", "dressed damping rates along one sweep axis"},
        {"susceptibility", "probe susceptibility with its resonance decomposition"},
        {"classify", "EIT/ATS labels (CSV + JSON report)"},
        {"oracle-check", "time-domain cross-check of the susceptibility at 30 points"},
        {"reproduce", "write the data behind one figure (fig2, fig4 .. fig8)"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        if (std::string(name) == "reproduce")
            sub->add_option("figure", figure, "fig2 | fig4 | fig5 | fig6 | fig7 | fig8")->required();
    }
    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        std::string text = config_path.empty() ? std::string{} : read_file(config_path);
        for (const auto& o : overrides) text += "\n" + o;
        const auto cfg = sfqc::cli::parse_config(text);
        if (print_config) {
            std::cout << sfqc::cli::to_config_text(cfg);
            return 0;
        }
        sfqc::cli::RunOptions opt;
        opt.jobs = jobs;
        opt.out_dir = !out_dir.empty() ? out_dir : (cfg.out_dir.empty() ? "." : cfg.out_dir);
        const std::vector<std::string> args = figure.empty() ? std::vector<std::string>{} : std::vector{figure};
        const auto outcome = sfqc::cli::run_command(cmd, args, cfg, opt);
        for (const auto& f : outcome.files) std::cout << f.string() << "\n";
        if (!outcome.failures.empty()) {
            for (const auto& f : outcome.failures) std::cerr << "sfqc: row failure: " << one_line(f) << "\n";
            return report(cmd, "row-failures",
                          std::to_string(outcome.failures.size()) + " row(s) failed; see the error column");
        }
        return 0;
    } catch (const sfqc::ConfigError& e) {
        return report(cmd, "config", e.what());
    } catch (const sfqc::BifurcationError& e) {
        return report(cmd, "bifurcation", e.what());
    } catch (const sfqc::OracleTimeout& e) {
        return report(cmd, "oracle-timeout", e.what());
    } catch (const sfqc::NonlinearityError& e) {
        return report(cmd, "nonlinearity", e.what());
    } catch (const sfqc::NumericalFailure& e) {
        return report(cmd, "numerical", e.what());
    } catch (const std::invalid_argument& e) {
        return report(cmd, "invalid-argument", e.what());
    } catch (const std::exception& e) {
        return report(cmd, "runtime", e.what());
    }
}
