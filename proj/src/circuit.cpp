#include "tpqr/circuit.hpp"

#include <cmath>
#include <map>

#include "tpqr/linalg.hpp"

namespace tpqr::circuit {

void CircuitParams::validate() const {
    if (!(E_J > 0) || !(E_C > 0) || !(E_L > 0) || !(Etilde_J > 0) || !(Etilde_C > 0))
        throw std::invalid_argument("CircuitParams: all energies must be > 0");
    if (!(alpha > 0) || !(alpha < 1))
        throw std::invalid_argument("CircuitParams: alpha must be in (0, 1)");
    if (!std::isfinite(f_s) || !std::isfinite(f_q))
        throw std::invalid_argument("CircuitParams: flux angles must be finite");
}

SquidConstants squid_constants(double E_J, double f_s) {
    if (!(E_J > 0)) throw std::invalid_argument("squid_constants: E_J must be > 0");
    return {2.0 * E_J * std::cos(0.5 * f_s), E_J * std::sin(0.5 * f_s)};
}

ResonatorMode resonator(double E_C, double K, double S, double E_L) {
    const double stiffness = K + S * S / (2.0 * E_L);
    if (!(stiffness > 0))
        throw RegimeError("resonator: K + S^2/2E_L <= 0, SQUID at or beyond its degeneracy point");
    ResonatorMode m;
    m.omega_c = std::sqrt(4.0 * E_C * stiffness);
    m.L_eff = 0.25 / stiffness;  // phi0^2 = 1/4 in units with e = hbar = 1
    m.omega_quartic = E_C * (K + 2.0 * S * S / E_L) / (24.0 * stiffness);
    return m;
}

double coupler_mode(double E_C, double Etilde_C, double alpha, double E_L) {
    if (!(E_C > 0) || !(Etilde_C > 0) || !(E_L > 0))
        throw std::invalid_argument("coupler_mode: energies must be > 0");
    // omega_L^2 = 2/(L(C + alpha Ctilde)) = 32 E_L E_C Etilde_C / (Etilde_C + alpha E_C)
    return std::sqrt(32.0 * E_L * E_C * Etilde_C / (Etilde_C + alpha * E_C));
}

namespace {

// Charge-basis flux-qubit Hamiltonian on states |n_p, n_m> with n_p + n_m
// even. Returns (omega_q, raw sine element, diagonal asymmetry).
struct QubitEig {
    double omega_q;
    Complex t_raw;
    double asym;
};

class ChargeBasis {
public:
    ChargeBasis(int cutoff) : n_(cutoff) {
        for (int p = -n_; p <= n_; ++p)
            for (int m = -n_; m <= n_; ++m)
                if (((p + m) % 2 + 2) % 2 == 0) {
                    index_[key(p, m)] = int(states_.size());
                    states_.push_back({p, m});
                }
    }
    int dim() const { return int(states_.size()); }
    int find(int p, int m) const {
        auto it = index_.find(key(p, m));
        return it == index_.end() ? -1 : it->second;
    }
    const std::pair<int, int>& state(int i) const { return states_[size_t(i)]; }

private:
    static long key(int p, int m) { return long(p + 64) * 1000 + (m + 64); }
    int n_;
    std::vector<std::pair<int, int>> states_;
    std::map<long, int> index_;
};

Matrix sine_operator(const ChargeBasis& basis, double f_q) {
    const int d = basis.dim();
    Matrix s = Matrix::Zero(d, d);
    const Complex up = std::exp(Complex(0, f_q)) / Complex(0, 2);
    const Complex dn = -std::exp(Complex(0, -f_q)) / Complex(0, 2);
    for (int i = 0; i < d; ++i) {
        auto [p, m] = basis.state(i);
        if (int j = basis.find(p, m + 2); j >= 0) s(j, i) += up;
        if (int j = basis.find(p, m - 2); j >= 0) s(j, i) += dn;
    }
    return s;
}

QubitEig solve_qubit(const ChargeBasis& basis, double Etilde_J, double Etilde_C, double alpha,
                     double f_q, double E_L, double S) {
    const int d = basis.dim();
    Matrix h = Matrix::Zero(d, d);
    const Complex e_fq = std::exp(Complex(0, f_q));
    const double sig2 = alpha * Etilde_J * alpha * Etilde_J / (4.0 * E_L);
    const double tilt = S * alpha * Etilde_J / (2.0 * E_L);
    for (int i = 0; i < d; ++i) {
        auto [p, m] = basis.state(i);
        h(i, i) += 2.0 * Etilde_C * p * p + 2.0 * Etilde_C / (1.0 + 2.0 * alpha) * m * m;
        h(i, i) += -sig2 * 0.5;  // -Sigma_m^2/4E_L, constant part of sin^2
        // -2 Etilde_J cos(phi_p) cos(phi_m)
        for (int dp : {+1, -1})
            for (int dm : {+1, -1})
                if (int j = basis.find(p + dp, m + dm); j >= 0) h(j, i) += -0.5 * Etilde_J;
        // -alpha Etilde_J cos(2 phi_m + f_q)
        if (int j = basis.find(p, m + 2); j >= 0) h(j, i) += -0.5 * alpha * Etilde_J * e_fq;
        if (int j = basis.find(p, m - 2); j >= 0)
            h(j, i) += -0.5 * alpha * Etilde_J * std::conj(e_fq);
        // +Sigma_m^2/(8E_L) cos(4 phi_m + 2 f_q) part of -sin^2/.. term
        if (int j = basis.find(p, m + 4); j >= 0) h(j, i) += sig2 * 0.25 * e_fq * e_fq;
        if (int j = basis.find(p, m - 4); j >= 0)
            h(j, i) += sig2 * 0.25 * std::conj(e_fq) * std::conj(e_fq);
        // -(S/2E_L) Sigma_m = -tilt * sin(2 phi_m + f_q)
        if (int j = basis.find(p, m + 2); j >= 0) h(j, i) += -tilt * e_fq / Complex(0, 2);
        if (int j = basis.find(p, m - 2); j >= 0)
            h(j, i) += -tilt * (-std::conj(e_fq)) / Complex(0, 2);
    }
    auto es = linalg::eigh_lowest(h, 2);
    const Matrix s = sine_operator(basis, f_q);
    const Vector v0 = es.vectors.col(0);
    const Vector v1 = es.vectors.col(1);
    QubitEig out;
    out.omega_q = es.values[1] - es.values[0];
    out.t_raw = v0.dot(s * v1);  // Eigen dot conjugates the left argument
    out.asym = std::real(v1.dot(s * v1)) - std::real(v0.dot(s * v0));
    return out;
}

// Illinois variant of regula falsi: bracketing, superlinear on smooth roots.
template <typename Fn>
double illinois_root(Fn&& f, double a, double fa, double b, double fb, double f_tol,
                     int max_iter = 80) {
    double x = b, fx = fb;
    for (int it = 0; it < max_iter; ++it) {
        x = b - fb * (b - a) / (fb - fa);
        fx = f(x);
        if (std::abs(fx) < f_tol) return x;
        if ((fx <= 0) == (fa <= 0)) {
            a = x;
            fa = fx;
            fb *= 0.5;
        } else {
            b = x;
            fb = fx;
            fa *= 0.5;
        }
    }
    throw ConvergenceError("illinois_root: no convergence to the requested tolerance");
}

}  // namespace

FluxQubitSolution flux_qubit_diagonalize(double Etilde_J, double Etilde_C, double alpha,
                                         double f_q, double E_L, double S,
                                         const FluxQubitOptions& opts) {
    if (!(alpha > 0) || !(alpha < 1))
        throw std::invalid_argument("flux_qubit_diagonalize: alpha must be in (0, 1)");
    ChargeBasis basis(opts.cutoff);

    double delta = 0.0;
    if (opts.compensate && S != 0.0) {
        // bracket the zero of the diagonal asymmetry, then bisect
        auto asym_of = [&](double d) {
            return solve_qubit(basis, Etilde_J, Etilde_C, alpha, f_q + d, E_L, S).asym;
        };
        double a = 0.0, fa = asym_of(a);
        double b = 0.0, fb = fa;
        bool bracketed = false;
        for (double step : {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
            for (double sgn : {+1.0, -1.0}) {
                b = sgn * step;
                fb = asym_of(b);
                if ((fa <= 0) != (fb <= 0)) {
                    bracketed = true;
                    break;
                }
            }
            if (bracketed) break;
        }
        if (!bracketed && std::abs(fa) > opts.comp_tol)
            throw ConvergenceError("flux_qubit_diagonalize: could not bracket the f_q "
                                   "compensation offset");
        if (bracketed) delta = illinois_root(asym_of, a, fa, b, fb, opts.comp_tol);
    }

    const double f_comp = f_q + delta;
    QubitEig sol = solve_qubit(basis, Etilde_J, Etilde_C, alpha, f_comp, E_L, S);
    if (opts.compensate && S != 0.0 && std::abs(sol.asym) > 10 * opts.comp_tol)
        throw ConvergenceError("flux_qubit_diagonalize: compensation did not reach tolerance, "
                               "asymmetry = " + std::to_string(sol.asym));

    FluxQubitSolution out;
    out.omega_q = sol.omega_q;
    out.T_fq = std::abs(sol.t_raw);
    out.T_raw = sol.t_raw;
    out.delta_fq = delta;
    out.asymmetry = sol.asym;
    out.domega_rel = 0.0;
    out.dT_rel = 0.0;

    if (opts.check_convergence) {
        ChargeBasis bigger(opts.cutoff + 2);
        QubitEig ref = solve_qubit(bigger, Etilde_J, Etilde_C, alpha, f_comp, E_L, S);
        out.domega_rel = std::abs(ref.omega_q - sol.omega_q) / std::max(std::abs(ref.omega_q), 1e-300);
        out.dT_rel = std::abs(std::abs(ref.t_raw) - out.T_fq) / std::max(std::abs(ref.t_raw), 1e-300);
        if (out.domega_rel > opts.conv_tol || out.dT_rel > opts.conv_tol)
            throw ConvergenceError(
                "flux_qubit_diagonalize: charge basis not converged at cutoff " +
                std::to_string(opts.cutoff) + " (domega_rel = " + std::to_string(out.domega_rel) +
                ", dT_rel = " + std::to_string(out.dT_rel) + ")");
    }
    return out;
}

EffectiveCouplings effective_couplings(double S, double E_L, double E_C, double K, double alpha,
                                       double Etilde_J, double T_fq) {
    const double stiffness = K + S * S / (2.0 * E_L);
    if (!(stiffness > 0))
        throw RegimeError("effective_couplings: SQUID at or beyond its degeneracy point");
    const double sigma01 = alpha * Etilde_J * T_fq;  // <0|Sigma_m|1>
    EffectiveCouplings g;
    g.g2 = S / (4.0 * E_L) * std::sqrt(E_C / stiffness) * sigma01;
    g.g4 = S / (48.0 * E_L) * (E_C / stiffness) * sigma01;
    return g;
}

std::vector<SweepRow> flux_sweep(const CircuitParams& params,
                                 const std::vector<double>& f_s_grid_radians,
                                 const FluxQubitOptions& opts) {
    params.validate();
    const double omega_c0 = resonator(params.E_C, 2.0 * params.E_J, 0.0, params.E_L).omega_c;
    const double omega_L = coupler_mode(params.E_C, params.Etilde_C, params.alpha, params.E_L);

    std::vector<SweepRow> rows;
    rows.reserve(f_s_grid_radians.size());
    for (double f_s : f_s_grid_radians) {
        const auto ks = squid_constants(params.E_J, f_s);
        const auto res = resonator(params.E_C, ks.K, ks.S, params.E_L);  // throws past degeneracy
        const auto qb = flux_qubit_diagonalize(params.Etilde_J, params.Etilde_C, params.alpha,
                                               params.f_q, params.E_L, ks.S, opts);
        const auto cp = effective_couplings(ks.S, params.E_L, params.E_C, ks.K, params.alpha,
                                            params.Etilde_J, qb.T_fq);
        SweepRow row;
        row.f_s = f_s;
        row.omega_c_ratio = res.omega_c / omega_c0;
        row.omega_q_over_c = qb.omega_q / res.omega_c;
        row.g2_over_c = cp.g2 / res.omega_c;
        row.g4_over_g2 = cp.g2 != 0 ? cp.g4 / cp.g2 : 0.0;
        row.quartic_over_c = res.omega_quartic / res.omega_c;
        row.omega_L_over_c = omega_L / res.omega_c;
        row.flagged = row.quartic_over_c > 0.05;
        rows.push_back(row);
    }
    return rows;
}

double tune_qubit_resonance(const CircuitParams& params, double Etilde_J_lo, double Etilde_J_hi,
                            const FluxQubitOptions& opts) {
    const auto ks = squid_constants(params.E_J, params.f_s);
    const auto res = resonator(params.E_C, ks.K, ks.S, params.E_L);
    FluxQubitOptions loop_opts = opts;
    loop_opts.check_convergence = false;  // checked once by the caller, not per iterate
    auto detune = [&](double EtJ) {
        const auto qb = flux_qubit_diagonalize(EtJ, params.Etilde_C, params.alpha, params.f_q,
                                               params.E_L, ks.S, loop_opts);
        return qb.omega_q - 2.0 * res.omega_c;
    };
    const double flo = detune(Etilde_J_lo);
    const double fhi = detune(Etilde_J_hi);
    if ((flo > 0) == (fhi > 0))
        throw NotFoundError("tune_qubit_resonance: omega_q - 2 omega_c does not change sign "
                            "over the Etilde_J range");
    return illinois_root(detune, Etilde_J_lo, flo, Etilde_J_hi, fhi, 1e-9 * res.omega_c);
}

DerivedCircuitQuantities derive(const CircuitParams& params, const FluxQubitOptions& opts) {
    params.validate();
    DerivedCircuitQuantities d;
    d.squid = squid_constants(params.E_J, params.f_s);
    d.res = resonator(params.E_C, d.squid.K, d.squid.S, params.E_L);
    d.omega_L = coupler_mode(params.E_C, params.Etilde_C, params.alpha, params.E_L);
    d.qubit = flux_qubit_diagonalize(params.Etilde_J, params.Etilde_C, params.alpha, params.f_q,
                                     params.E_L, d.squid.S, opts);
    d.couplings = effective_couplings(d.squid.S, params.E_L, params.E_C, d.squid.K, params.alpha,
                                      params.Etilde_J, d.qubit.T_fq);
    return d;
}

}  // namespace tpqr::circuit
