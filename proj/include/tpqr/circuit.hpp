#ifndef TPQR_CIRCUIT_HPP
#define TPQR_CIRCUIT_HPP

#include <optional>
#include <vector>

#include "tpqr/common.hpp"

namespace tpqr::circuit {

// Raw circuit constants. Energies in units of the SQUID junction energy E_J
// (or any common unit); angles in radians. The CLI-facing flux conventions:
// SQUID bias quoted with the degeneracy at 1.0 maps to radians via *pi, the
// qubit bias quoted in flux quanta maps via *2*pi.
struct CircuitParams {
    double E_J = 1.0;       // SQUID junction Josephson energy
    double E_C = 2e-3;      // SQUID charging energy e^2/2C
    double E_L = 30.0;      // coupling-inductance energy phi0^2/2L
    double Etilde_J = 11.6; // flux-qubit junction energy
    double Etilde_C = 11.6 / 80.0;
    double alpha = 0.8;     // small-junction ratio
    double f_s = 0.0;       // SQUID frustration, radians
    double f_q = M_PI;      // qubit frustration, radians

    void validate() const;  // throws on hard violations
    bool harmonic_squid_ok() const { return E_C / E_J <= 0.05; }
};

inline double squid_flux_to_radians(double f_s_degeneracy_units) {
    return f_s_degeneracy_units * M_PI;
}
inline double qubit_flux_to_radians(double f_q_flux_quanta) {
    return f_q_flux_quanta * 2.0 * M_PI;
}

struct SquidConstants {
    double K;  // 2 E_J cos(f_s/2)
    double S;  // E_J sin(f_s/2)
};
SquidConstants squid_constants(double E_J, double f_s);

struct ResonatorMode {
    double omega_c;        // sqrt(4 E_C (K + S^2/2E_L)), hbar = 1
    double L_eff;          // phi0^2 / (K + S^2/2E_L), in units where phi0^2 = 1/4 e^-2
    double omega_quartic;  // E_C (K + 2S^2/E_L) / (24 (K + S^2/2E_L))
};
ResonatorMode resonator(double E_C, double K, double S, double E_L);

// omega_L = sqrt(2/(L(C + alpha*Ctilde))) expressed through the energies.
double coupler_mode(double E_C, double Etilde_C, double alpha, double E_L);

struct FluxQubitSolution {
    double omega_q;       // E_1 - E_0 of the two-dimensional flux-qubit problem
    double T_fq;          // |<0| sin(2 phi_m + f_q) |1>|
    Complex T_raw;        // the raw complex matrix element
    double delta_fq;      // compensation offset added to f_q
    double asymmetry;     // residual <1|sin|1> - <0|sin|0> after compensation
    double domega_rel;    // relative omega_q shift at cutoff+2
    double dT_rel;        // relative T_fq shift at cutoff+2
};

struct FluxQubitOptions {
    int cutoff = 16;          // plane-wave charge cutoff per dimension
    double comp_tol = 1e-8;   // tolerance on the asymmetry measure
    double conv_tol = 1e-6;   // relative shift allowed when cutoff -> cutoff+2
    bool compensate = true;   // null the -(S/2E_L)Sigma_m tilt via delta f_q
    bool check_convergence = true;
};

// Diagonalizes the (phi_p, phi_m) flux-qubit Hamiltonian in the plane-wave
// charge basis restricted to n_p + n_m even (single-valuedness in the
// physical junction phases), including the -Sigma_m^2/4E_L correction and
// the -(S/2E_L)Sigma_m tilt.
FluxQubitSolution flux_qubit_diagonalize(double Etilde_J, double Etilde_C, double alpha,
                                         double f_q, double E_L, double S,
                                         const FluxQubitOptions& opts = {});

struct EffectiveCouplings {
    double g2;
    double g4;
};
EffectiveCouplings effective_couplings(double S, double E_L, double E_C, double K,
                                       double alpha, double Etilde_J, double T_fq);

struct SweepRow {
    double f_s;               // radians
    double omega_c_ratio;     // omega_c / omega_c(f_s = 0)
    double omega_q_over_c;
    double g2_over_c;
    double g4_over_g2;
    double quartic_over_c;    // Omega / omega_c
    double omega_L_over_c;
    bool flagged;             // Omega/omega_c > 0.05: harmonic approximation degrading
};

std::vector<SweepRow> flux_sweep(const CircuitParams& params,
                                 const std::vector<double>& f_s_grid_radians,
                                 const FluxQubitOptions& opts = {});

// Root-finds Etilde_J (at fixed Etilde_C, alpha) so that omega_q = 2 omega_c
// at the given working point. Returns the tuned Etilde_J.
double tune_qubit_resonance(const CircuitParams& params, double Etilde_J_lo,
                            double Etilde_J_hi, const FluxQubitOptions& opts = {});

// All derived quantities at one working point.
struct DerivedCircuitQuantities {
    SquidConstants squid;
    ResonatorMode res;
    double omega_L;
    FluxQubitSolution qubit;
    EffectiveCouplings couplings;
};
DerivedCircuitQuantities derive(const CircuitParams& params, const FluxQubitOptions& opts = {});

}  // namespace tpqr::circuit

#endif
