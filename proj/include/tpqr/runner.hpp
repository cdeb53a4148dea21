#ifndef TPQR_RUNNER_HPP
#define TPQR_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "tpqr/circuit.hpp"
#include "tpqr/floquet.hpp"

namespace tpqr::runner {

/// Config-file problems: unreadable, unparsable, schema violations. Exit 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Mode { CircuitSweep, SpectrumSweep, Fluorescence, Correlators };

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;       // used when step == 0
    double step = 0.0;    // used when > 0

    std::vector<double> expand() const;
};

struct NumericsBlock {
    int n_max = 80;
    int levels_per_parity = 12;
    int k_max = 5;
    int charge_cutoff = 16;
    int omega_grid_points = 2000;
    double comp_tol = 1e-8;
    double conv_tol = 1e-6;
};

struct DissipationBlock {
    double gamma_over_omega_c = 1e-3;
    double kappa_over_omega_q = 1e-3;
};

struct DriveBlock {
    DriveChannel channel = DriveChannel::Qubit;
    double F_over_gamma = 1.0;
    std::pair<Parity, int> from = {Parity::Even, 0};
    std::pair<Parity, int> to = {Parity::Even, 2};
};

struct CircuitBlock {
    circuit::CircuitParams params;   // f_s, f_q already in radians after parsing
    GridSpec f_s_grid;               // in degeneracy-at-one units as given
    bool tune_resonance = false;
    double tune_f_s = 0.86;          // working point for the tuner, degeneracy units
    double tune_lo = 1.0;
    double tune_hi = 40.0;
};

struct RunConfig {
    Mode mode = Mode::Fluorescence;
    EffectiveModelParams model;
    NumericsBlock numerics;
    DissipationBlock dissipation;
    DriveBlock drive;
    GridSpec omega_grid{0.0, 2.2, 2000, 0.0};
    GridSpec g2_grid;
    std::optional<CircuitBlock> circuit;
    bool collapse_diagnostic = false;
    int spectrum_levels_out = 8;
    std::string output_path = "out.csv";
    std::string output_format = "csv";  // csv | json
};

RunConfig parse_config(const std::string& path);

struct ValidationReport {
    std::string text;
    std::vector<std::string> warnings;
};

// Dry run: echoes resolved parameters and sizes without computing.
ValidationReport validate(const RunConfig& cfg);

// Executes the configured mode; writes output file(s) atomically. Returns
// the list of files written.
std::vector<std::string> run(const RunConfig& cfg, const std::string& out_dir_override = "",
                             int threads = 1);

}  // namespace tpqr::runner

#endif
