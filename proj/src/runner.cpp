#include "tpqr/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

extern "C" void openblas_set_num_threads(int);

namespace tpqr::runner {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> GridSpec::expand() const {
    std::vector<double> out;
    if (step > 0) {
        for (double v = min; v <= max + 0.5 * step; v += step) out.push_back(v);
    } else {
        if (points < 1) return out;
        if (points == 1) {
            out.push_back(min);
            return out;
        }
        for (int i = 0; i < points; ++i)
            out.push_back(min + (max - min) * double(i) / double(points - 1));
    }
    return out;
}

namespace {

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_num(const json& j, const char* key, double fallback) {
    if (const json* v = find(j, key)) {
        if (!v->is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
        return v->get<double>();
    }
    return fallback;
}

int get_int(const json& j, const char* key, int fallback) {
    if (const json* v = find(j, key)) {
        if (!v->is_number_integer())
            throw ConfigError(std::string("config: '") + key + "' must be an integer");
        return v->get<int>();
    }
    return fallback;
}

GridSpec parse_grid(const json& j, const char* name) {
    GridSpec g;
    if (!j.is_object()) throw ConfigError(std::string("config: '") + name + "' must be an object");
    g.min = get_num(j, "min", 0.0);
    g.max = get_num(j, "max", g.min);
    g.points = get_int(j, "points", 0);
    g.step = get_num(j, "step", 0.0);
    if (g.step <= 0 && g.points < 1)
        throw ConfigError(std::string("config: '") + name + "' needs 'points' or 'step'");
    if (g.max < g.min) throw ConfigError(std::string("config: '") + name + "' has max < min");
    return g;
}

std::pair<Parity, int> parse_level_ref(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer())
        throw ConfigError(std::string("config: '") + name + "' must be [\"+\"|\"-\", index]");
    const std::string p = j[0].get<std::string>();
    if (p != "+" && p != "-")
        throw ConfigError(std::string("config: '") + name + "' parity must be \"+\" or \"-\"");
    const int idx = j[1].get<int>();
    if (idx < 0) throw ConfigError(std::string("config: '") + name + "' index must be >= 0");
    return {p == "+" ? Parity::Even : Parity::Odd, idx};
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig cfg;
    const json* mode = find(j, "mode");
    if (!mode || !mode->is_string()) throw ConfigError("config: 'mode' (string) is required");
    const std::string m = mode->get<std::string>();
    if (m == "circuit-sweep")
        cfg.mode = Mode::CircuitSweep;
    else if (m == "spectrum-sweep")
        cfg.mode = Mode::SpectrumSweep;
    else if (m == "fluorescence")
        cfg.mode = Mode::Fluorescence;
    else if (m == "correlators")
        cfg.mode = Mode::Correlators;
    else
        throw ConfigError("config: unknown mode '" + m + "'");

    if (const json* b = find(j, "model")) {
        cfg.model.omega_c = get_num(*b, "omega_c", 1.0);
        cfg.model.omega_q = get_num(*b, "omega_q", 2.0 * cfg.model.omega_c);
        cfg.model.g2 = get_num(*b, "g2", 0.0);
        cfg.model.g4 = get_num(*b, "g4", 0.0);
        cfg.model.omega_quartic = get_num(*b, "omega_quartic", 0.0);
    }
    if (const json* b = find(j, "numerics")) {
        cfg.numerics.n_max = get_int(*b, "n_max", cfg.numerics.n_max);
        cfg.numerics.levels_per_parity =
            get_int(*b, "levels_per_parity", cfg.numerics.levels_per_parity);
        cfg.numerics.k_max = get_int(*b, "k_max", cfg.numerics.k_max);
        cfg.numerics.charge_cutoff = get_int(*b, "charge_cutoff", cfg.numerics.charge_cutoff);
        cfg.numerics.comp_tol = get_num(*b, "comp_tol", cfg.numerics.comp_tol);
        cfg.numerics.conv_tol = get_num(*b, "conv_tol", cfg.numerics.conv_tol);
        if (cfg.numerics.n_max < 1 || cfg.numerics.levels_per_parity < 1 ||
            cfg.numerics.k_max < 1 || cfg.numerics.charge_cutoff < 2)
            throw ConfigError("config: numerics block values must be positive");
        if (cfg.numerics.levels_per_parity > cfg.numerics.n_max + 1)
            throw ConfigError("config: levels_per_parity cannot exceed n_max + 1");
    }
    if (const json* b = find(j, "dissipation")) {
        cfg.dissipation.gamma_over_omega_c =
            get_num(*b, "gamma_over_omega_c", cfg.dissipation.gamma_over_omega_c);
        cfg.dissipation.kappa_over_omega_q =
            get_num(*b, "kappa_over_omega_q", cfg.dissipation.kappa_over_omega_q);
        if (cfg.dissipation.gamma_over_omega_c < 0 || cfg.dissipation.kappa_over_omega_q < 0)
            throw ConfigError("config: dissipation rates must be >= 0");
    }
    if (const json* b = find(j, "drive")) {
        if (const json* ch = find(*b, "channel")) {
            const std::string c = ch->get<std::string>();
            if (c == "cavity")
                cfg.drive.channel = DriveChannel::Cavity;
            else if (c == "qubit")
                cfg.drive.channel = DriveChannel::Qubit;
            else
                throw ConfigError("config: drive.channel must be 'cavity' or 'qubit'");
        }
        cfg.drive.F_over_gamma = get_num(*b, "F_over_gamma", cfg.drive.F_over_gamma);
        if (cfg.drive.F_over_gamma < 0) throw ConfigError("config: F_over_gamma must be >= 0");
        if (const json* r = find(*b, "resonance")) {
            if (const json* f = find(*r, "from")) cfg.drive.from = parse_level_ref(*f, "from");
            if (const json* t = find(*r, "to")) cfg.drive.to = parse_level_ref(*t, "to");
        }
    }
    if (const json* b = find(j, "omega_grid")) cfg.omega_grid = parse_grid(*b, "omega_grid");
    if (const json* b = find(j, "g2_grid")) cfg.g2_grid = parse_grid(*b, "g2_grid");
    if (const json* b = find(j, "circuit")) {
        CircuitBlock cb;
        cb.params.E_J = get_num(*b, "E_J", 1.0);
        cb.params.E_C = get_num(*b, "E_C", 2e-3);
        cb.params.E_L = get_num(*b, "E_L", 30.0);
        cb.params.Etilde_J = get_num(*b, "Etilde_J", 11.6);
        cb.params.Etilde_C = get_num(*b, "Etilde_C", 11.6 / 80.0);
        cb.params.alpha = get_num(*b, "alpha", 0.8);
        // flux conventions: SQUID bias has its degeneracy at 1.0, qubit bias in flux quanta
        cb.params.f_q = circuit::qubit_flux_to_radians(get_num(*b, "f_q", 0.5));
        if (const json* g = find(*b, "f_s_grid"))
            cb.f_s_grid = parse_grid(*g, "f_s_grid");
        else
            throw ConfigError("config: circuit block needs 'f_s_grid'");
        cb.tune_resonance = find(*b, "tune_resonance") && (*b)["tune_resonance"].get<bool>();
        cb.tune_f_s = get_num(*b, "tune_f_s", 0.86);
        cb.tune_lo = get_num(*b, "tune_Etilde_J_lo", 1.0);
        cb.tune_hi = get_num(*b, "tune_Etilde_J_hi", 40.0);
        cb.params.validate();
        cfg.circuit = cb;
    }
    if (const json* b = find(j, "collapse_diagnostic")) cfg.collapse_diagnostic = b->get<bool>();
    cfg.spectrum_levels_out = get_int(j, "spectrum_levels_out", cfg.spectrum_levels_out);
    if (const json* b = find(j, "output")) {
        if (const json* p = find(*b, "path")) cfg.output_path = p->get<std::string>();
        if (const json* f = find(*b, "format")) {
            cfg.output_format = f->get<std::string>();
            if (cfg.output_format != "csv" && cfg.output_format != "json")
                throw ConfigError("config: output.format must be 'csv' or 'json'");
        }
    }

    // mode-specific required pieces
    switch (cfg.mode) {
        case Mode::CircuitSweep:
            if (!cfg.circuit) throw ConfigError("config: circuit-sweep needs a 'circuit' block");
            break;
        case Mode::SpectrumSweep:
        case Mode::Correlators:
            if (cfg.g2_grid.expand().empty())
                throw ConfigError("config: this mode needs a non-empty 'g2_grid'");
            break;
        case Mode::Fluorescence:
            break;
    }
    return cfg;
}

namespace {

struct Chain {
    DressedSpectrum spectrum;
    RetainedBasis basis;
    LindbladModel model;
    LiouvillianParts parts;
    OutputFieldOperator out;
    DissipationRates rates;
    DriveConfig drive;
};

Chain build_chain(const EffectiveModelParams& mp, const NumericsBlock& num,
                  const DissipationBlock& diss, const DriveBlock& drv) {
    refuse_beyond_collapse(mp.g2, mp.omega_c);
    Chain c;
    const auto space = make_space(num.n_max);
    c.spectrum = dressed_spectrum(build_hamiltonian(mp, space), mp);
    c.basis = retain_levels(c.spectrum, num.levels_per_parity);
    c.rates.gamma = diss.gamma_over_omega_c * mp.omega_c;
    c.rates.kappa = diss.kappa_over_omega_q * mp.omega_q;
    const auto tables = transition_rates(c.spectrum, c.basis, c.rates);
    c.model = build_dissipator(c.spectrum, c.basis, tables);
    c.drive.channel = drv.channel;
    c.drive.amplitude = drv.F_over_gamma * c.rates.gamma;
    c.drive.omega_d = drive_frequency(c.spectrum, drv.from, drv.to);
    if (!(c.drive.omega_d > 0))
        throw std::invalid_argument("resonance selector gives a non-positive drive frequency");
    c.parts = liouvillian(c.model, c.spectrum, c.drive);
    c.out = output_field(c.spectrum, c.basis);
    return c;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

class OutputDoc {
public:
    OutputDoc(const std::string& mode, const std::vector<std::string>& columns)
        : mode_(mode), columns_(columns) {}

    void meta(const std::string& key, const std::string& value) {
        meta_.emplace_back(key, value);
    }
    void meta(const std::string& key, double value) { meta(key, format_double(value)); }
    void meta(const std::string& key, int value) { meta(key, std::to_string(value)); }

    void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

    std::string render_csv() const {
        std::ostringstream os;
        os << "# tpqr " << mode_ << " v" << version_string << "\n";
        for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
        for (size_t i = 0; i < columns_.size(); ++i)
            os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
        for (const auto& r : rows_) {
            for (size_t i = 0; i < r.size(); ++i) os << r[i] << (i + 1 < r.size() ? "," : "\n");
        }
        return os.str();
    }

    std::string render_json() const {
        json j;
        j["generator"] = std::string("tpqr ") + mode_ + " v" + version_string;
        json meta = json::object();
        for (const auto& [k, v] : meta_) meta[k] = v;
        j["metadata"] = meta;
        j["columns"] = columns_;
        json rows = json::array();
        for (const auto& r : rows_) rows.push_back(r);
        j["rows"] = rows;
        return j.dump(2) + "\n";
    }

private:
    std::string mode_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

void add_common_meta(OutputDoc& doc, const RunConfig& cfg) {
    doc.meta("model.omega_c", cfg.model.omega_c);
    doc.meta("model.omega_q", cfg.model.omega_q);
    doc.meta("model.g2", cfg.model.g2);
    doc.meta("model.g4", cfg.model.g4);
    doc.meta("model.omega_quartic", cfg.model.omega_quartic);
    doc.meta("numerics.n_max", cfg.numerics.n_max);
    doc.meta("numerics.levels_per_parity", cfg.numerics.levels_per_parity);
    doc.meta("numerics.k_max", cfg.numerics.k_max);
    doc.meta("dissipation.gamma_over_omega_c", cfg.dissipation.gamma_over_omega_c);
    doc.meta("dissipation.kappa_over_omega_q", cfg.dissipation.kappa_over_omega_q);
    doc.meta("drive.F_over_gamma", cfg.drive.F_over_gamma);
    doc.meta("drive.channel", cfg.drive.channel == DriveChannel::Qubit ? "qubit" : "cavity");
    doc.meta("note.rate_labels",
             "SM-literal: Gamma pairs gamma with the (a - a^dag) matrix element, K pairs kappa "
             "with (sigma- - sigma+); the main text swaps the atomic/cavity labels");
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write output file " + tmp.string());
        out << content;
    }
    fs::rename(tmp, p);
}

std::string resolve_path(const RunConfig& cfg, const std::string& out_dir,
                         const std::string& suffix = "") {
    fs::path p(cfg.output_path);
    if (!suffix.empty()) {
        fs::path stem = p.stem();
        fs::path ext = p.extension();
        p = p.parent_path() / (stem.string() + suffix + ext.string());
    }
    if (!out_dir.empty()) p = fs::path(out_dir) / p.filename();
    return p.string();
}


std::string render(const OutputDoc& doc, const RunConfig& cfg) {
    return cfg.output_format == "json" ? doc.render_json() : doc.render_csv();
}

// deterministic worker pool: results gathered in input order
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    openblas_set_num_threads(1);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < std::min(threads, n); ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    openblas_set_num_threads(0);
    if (error) std::rethrow_exception(error);
}

std::vector<std::string> run_circuit_sweep(const RunConfig& cfg, const std::string& out_dir,
                                           int threads) {
    const CircuitBlock& cb = *cfg.circuit;
    circuit::CircuitParams params = cb.params;
    circuit::FluxQubitOptions opts;
    opts.cutoff = cfg.numerics.charge_cutoff;
    opts.comp_tol = cfg.numerics.comp_tol;
    opts.conv_tol = cfg.numerics.conv_tol;

    double tuned = params.Etilde_J;
    if (cb.tune_resonance) {
        circuit::CircuitParams at_work = params;
        at_work.f_s = circuit::squid_flux_to_radians(cb.tune_f_s);
        tuned = circuit::tune_qubit_resonance(at_work, cb.tune_lo, cb.tune_hi, opts);
        params.Etilde_J = tuned;
    }

    const auto grid_units = cb.f_s_grid.expand();
    std::vector<circuit::SweepRow> rows(grid_units.size());
    parallel_for(int(grid_units.size()), threads, [&](int i) {
        const double f_s = circuit::squid_flux_to_radians(grid_units[size_t(i)]);
        circuit::CircuitParams p = params;
        p.f_s = f_s;
        const auto sweep = circuit::flux_sweep(p, {f_s}, opts);
        rows[size_t(i)] = sweep.front();
    });

    OutputDoc doc("circuit-sweep",
                  {"f_s", "omega_c_ratio", "omega_q_over_omega_c", "g2_over_omega_c",
                   "g4_over_g2", "Omega_over_omega_c", "omega_L_over_omega_c", "flagged"});
    doc.meta("circuit.E_J", params.E_J);
    doc.meta("circuit.E_C", params.E_C);
    doc.meta("circuit.E_L", params.E_L);
    doc.meta("circuit.Etilde_J", params.Etilde_J);
    doc.meta("circuit.Etilde_C", params.Etilde_C);
    doc.meta("circuit.alpha", params.alpha);
    doc.meta("circuit.f_q_flux_quanta", params.f_q / (2 * M_PI));
    doc.meta("circuit.charge_cutoff", opts.cutoff);
    doc.meta("circuit.flux_convention",
             "f_s in units with the SQUID degeneracy at 1.0 (x pi radians); f_q in flux quanta");
    if (cb.tune_resonance) doc.meta("circuit.tuned_Etilde_J", tuned);
    doc.meta("note.g2_anchor",
             "absolute g2/omega_c from the printed formulas undershoots the quoted 0.23 at "
             "f_s = 0.86 (|T| <= 1 bound); trends and the omega_c ratio are the asserted "
             "quantities, computed values are reported as-is");
    size_t nflag = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.flagged) ++nflag;
        doc.row({format_double(grid_units[i]), format_double(r.omega_c_ratio),
                 format_double(r.omega_q_over_c), format_double(r.g2_over_c),
                 format_double(r.g4_over_g2), format_double(r.quartic_over_c),
                 format_double(r.omega_L_over_c), r.flagged ? "1" : "0"});
    }
    if (nflag > 0)
        std::cerr << "warning: " << nflag << " sweep points have Omega/omega_c > 0.05 "
                  << "(harmonic SQUID approximation degrading); see 'flagged' column\n";

    const std::string path = resolve_path(cfg, out_dir);
    write_file(path, render(doc, cfg));
    return {path};
}

std::vector<std::string> run_spectrum_sweep(const RunConfig& cfg, const std::string& out_dir,
                                            int threads) {
    const auto grid = cfg.g2_grid.expand();
    for (double g2 : grid) refuse_beyond_collapse(g2, cfg.model.omega_c);
    const auto space = make_space(cfg.numerics.n_max);
    const int nlev = std::min(cfg.spectrum_levels_out, cfg.numerics.n_max + 1);

    struct Point {
        std::vector<double> even, odd;
    };
    std::vector<Point> pts(grid.size());
    parallel_for(int(grid.size()), threads, [&](int i) {
        EffectiveModelParams p = cfg.model;
        p.g2 = grid[size_t(i)];
        auto sp = dressed_spectrum(build_hamiltonian(p, space), p);
        for (int j = 0; j < nlev; ++j) {
            pts[size_t(i)].even.push_back(sp.energy(Parity::Even, j));
            pts[size_t(i)].odd.push_back(sp.energy(Parity::Odd, j));
        }
    });

    OutputDoc doc("spectrum-sweep", {"g2_over_omega_c", "parity", "index", "energy_over_omega_c"});
    add_common_meta(doc, cfg);
    doc.meta("spectrum_levels_out", nlev);
    for (size_t i = 0; i < grid.size(); ++i) {
        for (int j = 0; j < nlev; ++j) {
            doc.row({format_double(grid[i] / cfg.model.omega_c), "+", std::to_string(j),
                     format_double(pts[i].even[size_t(j)] / cfg.model.omega_c)});
            doc.row({format_double(grid[i] / cfg.model.omega_c), "-", std::to_string(j),
                     format_double(pts[i].odd[size_t(j)] / cfg.model.omega_c)});
        }
    }
    const std::string path = resolve_path(cfg, out_dir);
    std::vector<std::string> written;
    write_file(path, render(doc, cfg));
    written.push_back(path);

    if (cfg.collapse_diagnostic) {
        auto rows = collapse_diagnostic(cfg.model, grid, space);
        OutputDoc cdoc("collapse-diagnostic", {"g2_over_omega_c", "mean_even_gap_over_omega_c"});
        add_common_meta(cdoc, cfg);
        for (const auto& r : rows)
            cdoc.row({format_double(r.g2 / cfg.model.omega_c),
                      format_double(r.mean_gap / cfg.model.omega_c)});
        const std::string cpath = resolve_path(cfg, out_dir, "_collapse");
        write_file(cpath, render(cdoc, cfg));
        written.push_back(cpath);
    }
    return written;
}

std::vector<std::string> run_fluorescence(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.drive.F_over_gamma > 10)
        std::cerr << "warning: F/gamma = " << cfg.drive.F_over_gamma
                  << " is outside the weak-drive validity of the dressed jump operators\n";
    Chain c = build_chain(cfg.model, cfg.numerics, cfg.dissipation, cfg.drive);
    const auto fl = build_floquet_liouvillian(c.parts, cfg.numerics.k_max);
    const auto dec = biorthogonal_eigensystem(fl);
    const auto steady = steady_state(dec);

    const auto wg = cfg.omega_grid.expand();
    RealVector omega = Eigen::Map<const RealVector>(wg.data(), long(wg.size()));
    omega *= cfg.model.omega_c;
    SpectrumMetadata meta;
    meta.g2 = cfg.model.g2;
    meta.omega_d = c.drive.omega_d;
    meta.amplitude = c.drive.amplitude;
    meta.gamma = c.rates.gamma;
    meta.kappa = c.rates.kappa;
    meta.n_max = cfg.numerics.n_max;
    meta.m_per_parity = cfg.numerics.levels_per_parity;
    meta.k_max = cfg.numerics.k_max;
    const auto res = fluorescence_spectrum(dec, steady, c.out, omega, meta,
                                           1e-8 * cfg.model.omega_c);

    OutputDoc doc("fluorescence", {"omega_over_omega_c", "S"});
    add_common_meta(doc, cfg);
    doc.meta("drive.omega_d_over_omega_c", c.drive.omega_d / cfg.model.omega_c);
    doc.meta("drive.amplitude_over_omega_c", c.drive.amplitude / cfg.model.omega_c);
    doc.meta("convergence.pairing_residual", dec.pairing_residual);
    doc.meta("convergence.max_im_omega", dec.max_im_omega);
    doc.meta("convergence.steady_trace_error", steady.trace_error);
    doc.meta("convergence.steady_min_eigenvalue", steady.min_eigenvalue);
    for (int i = 0; i < res.omega.size(); ++i)
        doc.row({format_double(res.omega[i] / cfg.model.omega_c), format_double(res.values[i])});

    const std::string path = resolve_path(cfg, out_dir);
    write_file(path, render(doc, cfg));
    return {path};
}

std::vector<std::string> run_correlators(const RunConfig& cfg, const std::string& out_dir,
                                         int threads) {
    if (cfg.drive.F_over_gamma > 10)
        std::cerr << "warning: F/gamma = " << cfg.drive.F_over_gamma
                  << " is outside the weak-drive validity of the dressed jump operators\n";
    const auto grid = cfg.g2_grid.expand();
    for (double g2 : grid) refuse_beyond_collapse(g2, cfg.model.omega_c);

    struct Point {
        double g2z = 0, g3z = 0;
    };
    std::vector<Point> pts(grid.size());
    parallel_for(int(grid.size()), threads, [&](int i) {
        EffectiveModelParams p = cfg.model;
        p.g2 = grid[size_t(i)];
        Chain c = build_chain(p, cfg.numerics, cfg.dissipation, cfg.drive);
        const auto steady = steady_state_direct(c.parts, cfg.numerics.k_max);
        const auto et = equal_time_correlators(steady, c.out);
        pts[size_t(i)] = {et.g2_zero, et.g3_zero};
    });

    OutputDoc doc("correlators", {"g2_over_omega_c", "g2_zero", "g3_zero"});
    add_common_meta(doc, cfg);
    for (size_t i = 0; i < grid.size(); ++i)
        doc.row({format_double(grid[i] / cfg.model.omega_c), format_double(pts[i].g2z),
                 format_double(pts[i].g3z)});
    const std::string path = resolve_path(cfg, out_dir);
    write_file(path, render(doc, cfg));
    return {path};
}

}  // namespace

ValidationReport validate(const RunConfig& cfg) {
    ValidationReport rep;
    std::ostringstream os;
    const int m = cfg.numerics.levels_per_parity;
    const int base_dim = 4 * m * m;
    const long total = long(base_dim) * (2 * cfg.numerics.k_max + 1);
    os << "mode: ";
    switch (cfg.mode) {
        case Mode::CircuitSweep: os << "circuit-sweep"; break;
        case Mode::SpectrumSweep: os << "spectrum-sweep"; break;
        case Mode::Fluorescence: os << "fluorescence"; break;
        case Mode::Correlators: os << "correlators"; break;
    }
    os << "\nmodel: omega_c=" << cfg.model.omega_c << " omega_q=" << cfg.model.omega_q
       << " g2=" << cfg.model.g2 << " g4=" << cfg.model.g4
       << " omega_quartic=" << cfg.model.omega_quartic;
    os << "\nnumerics: n_max=" << cfg.numerics.n_max << " levels_per_parity=" << m
       << " k_max=" << cfg.numerics.k_max;
    os << "\nhilbert dim: " << 2 * (cfg.numerics.n_max + 1);
    os << "\nretained levels: " << 2 * m << "  base_dim: " << base_dim
       << "  floquet dim: " << total;
    os << "\neigensolve memory estimate: "
       << (2.0 * 16.0 * double(total) * double(total) / (1 << 30)) << " GiB";
    os << "\ndissipation: gamma/omega_c=" << cfg.dissipation.gamma_over_omega_c
       << " kappa/omega_q=" << cfg.dissipation.kappa_over_omega_q
       << "  drive: F/gamma=" << cfg.drive.F_over_gamma << "\n";
    rep.text = os.str();

    if (cfg.drive.F_over_gamma > 10)
        rep.warnings.push_back("strong-drive regime outside jump-operator validity (F/gamma = " +
                               format_double(cfg.drive.F_over_gamma) + " > 10)");
    if (cfg.mode == Mode::Fluorescence || cfg.mode == Mode::Correlators ||
        cfg.mode == Mode::SpectrumSweep) {
        const double hi = cfg.g2_grid.expand().empty()
                              ? cfg.model.g2
                              : cfg.g2_grid.expand().back();
        refuse_beyond_collapse(std::max(hi, cfg.model.g2), cfg.model.omega_c);
    }
    if (cfg.circuit) {
        if (cfg.circuit->params.E_C / cfg.circuit->params.E_J > 0.05)
            rep.warnings.push_back("E_C/E_J > 0.05, harmonic SQUID approximation is strained");
        for (double u : cfg.circuit->f_s_grid.expand()) {
            const auto ks = circuit::squid_constants(cfg.circuit->params.E_J,
                                                     circuit::squid_flux_to_radians(u));
            circuit::resonator(cfg.circuit->params.E_C, ks.K, ks.S, cfg.circuit->params.E_L);
        }
    }
    return rep;
}

std::vector<std::string> run(const RunConfig& cfg, const std::string& out_dir_override,
                             int threads) {
    validate(cfg);  // regime and schema guards apply to real runs too
    switch (cfg.mode) {
        case Mode::CircuitSweep: return run_circuit_sweep(cfg, out_dir_override, threads);
        case Mode::SpectrumSweep: return run_spectrum_sweep(cfg, out_dir_override, threads);
        case Mode::Fluorescence: return run_fluorescence(cfg, out_dir_override);
        case Mode::Correlators: return run_correlators(cfg, out_dir_override, threads);
    }
    throw std::logic_error("unreachable");
}

}  // namespace tpqr::runner
