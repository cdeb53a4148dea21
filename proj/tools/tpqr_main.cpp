#include <iostream>

#include <CLI11.hpp>

#include "tpqr/runner.hpp"

namespace {

constexpr const char* column_help =
    "Output columns per mode (CSV, '#'-prefixed metadata header):\n"
    "  circuit-sweep : f_s, omega_c_ratio, omega_q_over_omega_c, g2_over_omega_c,\n"
    "                  g4_over_g2, Omega_over_omega_c, omega_L_over_omega_c, flagged\n"
    "                  (f_s in units with the SQUID degeneracy at 1.0)\n"
    "  spectrum-sweep: g2_over_omega_c, parity, index, energy_over_omega_c\n"
    "                  (optional second file *_collapse: g2_over_omega_c, mean_even_gap)\n"
    "  fluorescence  : omega_over_omega_c, S\n"
    "  correlators   : g2_over_omega_c, g2_zero, g3_zero\n"
    "Exit codes: 0 ok, 2 config error, 3 convergence failure, 4 refused regime.";

int dispatch(const std::string& config_path, bool dry_run, const std::string& out_dir,
             int threads) {
    try {
        const auto cfg = tpqr::runner::parse_config(config_path);
        if (dry_run) {
            const auto rep = tpqr::runner::validate(cfg);
            std::cout << rep.text;
            for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
            return 0;
        }
        const auto files = tpqr::runner::run(cfg, out_dir, threads);
        for (const auto& f : files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const tpqr::runner::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tpqr::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const tpqr::RegimeError& e) {
        std::cerr << "refused regime: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tpqr - driven-dissipative two-photon quantum Rabi simulator"};
    app.footer(column_help);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 1;

    auto* run_cmd = app.add_subcommand("run", "execute a config and write its artifacts");
    run_cmd->add_option("config", config_path, "JSON config file")->required();
    run_cmd->add_option("--out", out_dir, "override output directory");
    run_cmd->add_option("--threads", threads, "worker threads for sweep modes")
        ->check(CLI::PositiveNumber);

    auto* val_cmd = app.add_subcommand("validate", "dry-run: echo resolved parameters");
    val_cmd->add_option("config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    const bool dry = app.got_subcommand(val_cmd);
    return dispatch(config_path, dry, out_dir, threads);
}
