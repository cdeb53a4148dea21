#ifndef TPQR_FLOQUET_HPP
#define TPQR_FLOQUET_HPP

#include <vector>

#include "tpqr/lindblad.hpp"

namespace tpqr {

struct FloquetSpace {
    int base_dim = 0;  // density-matrix space dimension d^2
    int k_max = 0;
    double omega_d = 0.0;

    int total_dim() const { return base_dim * (2 * k_max + 1); }
    int block_of(int m) const { return (m + k_max) * base_dim; }
};

// Rate-form Floquet-Liouville matrix: diagonal blocks L0 + i m omega_d,
// sub/super blocks L+1/L-1. Its eigenvalues Lambda map to the frequency
// convention via Omega = i Lambda, so that the propagator carries
// exp(-i Omega tau) = exp(Lambda tau).
struct FloquetLiouvillian {
    FloquetSpace space;
    Matrix matrix;
};

FloquetLiouvillian build_floquet_liouvillian(const LiouvillianParts& parts, int k_max);

struct FloquetDecomposition {
    FloquetSpace space;
    Vector omegas;  // frequency form, Im <= ~0
    Matrix right;   // columns R_i
    Matrix left;    // columns L_i with L_i^H R_j = delta_ij
    double pairing_residual = 0.0;
    double max_im_omega = 0.0;
    int steady_index = -1;  // eigenvalue closest to zero

    // representative in the first Brillouin zone, Re in (-omega_d/2, omega_d/2]
    Complex canonical_omega(int i) const;
};

FloquetDecomposition biorthogonal_eigensystem(const FloquetLiouvillian& fl);

struct PeriodicSteadyState {
    int dim = 0;
    int k_max = 0;
    double omega_d = 0.0;
    std::vector<Matrix> components;  // rho^(m), m = -k_max .. k_max
    double trace_error = 0.0;        // max deviation of trace(rho(t)) from 1
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;     // most negative eigenvalue over sampled t

    const Matrix& component(int m) const;
    Matrix at_time(double t) const;
};

PeriodicSteadyState steady_state(const FloquetDecomposition& dec);

// Same state via block-tridiagonal inverse iteration; avoids the full
// eigendecomposition, used for parameter sweeps.
PeriodicSteadyState steady_state_direct(const LiouvillianParts& parts, int k_max);

// g+(tau) from the eigen-expansion on the given tau grid (tau >= 0).
Vector correlation_gplus(const FloquetDecomposition& dec, const PeriodicSteadyState& steady,
                         const OutputFieldOperator& out, const RealVector& tau_grid);

struct SpectrumMetadata {
    double g2 = 0.0;
    double omega_d = 0.0;
    double amplitude = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
    int n_max = 0;
    int m_per_parity = 0;
    int k_max = 0;
};

struct SpectrumResult {
    RealVector omega;
    RealVector values;
    SpectrumMetadata meta;
};

// Semi-analytical fluorescence spectrum. Eigenvalues with |Im Omega| below
// delta_floor are regularized to Im = -delta_broadening; extra_broadening
// shifts every eigenvalue (matched exponential window for oracle
// comparisons, zero in production).
SpectrumResult fluorescence_spectrum(const FloquetDecomposition& dec,
                                     const PeriodicSteadyState& steady,
                                     const OutputFieldOperator& out,
                                     const RealVector& omega_grid,
                                     const SpectrumMetadata& meta,
                                     double delta_broadening = 1e-8,
                                     double extra_broadening = 0.0);

struct EqualTimeCorrelators {
    double g2_zero = 0.0;
    double g3_zero = 0.0;
};

// Period-averaged g2(0), g3(0) of the output field (t_samples-point uniform
// average of numerators and denominator).
EqualTimeCorrelators equal_time_correlators(const PeriodicSteadyState& steady,
                                            const OutputFieldOperator& out,
                                            int t_samples = 16);

// Same estimator on a single density matrix (unit-test hook).
EqualTimeCorrelators photon_statistics(const Matrix& rho, const Matrix& x_plus);

// ---- time-domain machinery (cross-validation oracle) ----

struct PropagationOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double dt_init = 0.01;
    double dt_min = 1e-10;
    long max_steps = 50000000;
};

// Adaptive RK45 integration of drho/dt = L(t) rho; returns rho at the
// requested sample times (ascending, first >= t0).
std::vector<Matrix> time_domain_propagate(const LiouvillianParts& parts, const Matrix& rho0,
                                          double t0, const RealVector& sample_times,
                                          const PropagationOptions& opts = {});

// One drive period split into nr interval propagators U(t_{j+1}, t_j),
// t_j = t0 + j T/nr, integrated by fixed-step RK4 with nsub steps per period.
struct PeriodPartition {
    double omega_d = 0.0;
    int dim = 0;  // superoperator dimension d^2
    int nr = 0;
    std::vector<Matrix> maps;
};

PeriodPartition build_period_partition(const LiouvillianParts& parts, int nr = 32,
                                       int nsub = 900, double t0 = 0.0);

// Marches whole periods until the stroboscopic state stops moving; this is
// plain long-time integration, independent of the Floquet eigensystem.
Matrix stroboscopic_fixed_point(const PeriodPartition& part, const Matrix& rho0,
                                int max_periods = 400000, double tol = 1e-13);

// Time-domain g+(tau) on tau_j = j T/nr by quantum regression: seeds
// rho(t0_i) X- marched with the interval maps, averaged over nt0 phases.
Vector time_domain_gplus(const PeriodPartition& part, const Matrix& rho_fixed,
                         const OutputFieldOperator& out, int n_tau, int nt0 = 8);

// 2 Re integral of e^{i omega tau - eta tau} g+(tau) by trapezoid.
RealVector spectrum_from_gplus(const Vector& gplus, double dtau, const RealVector& omega_grid,
                               double eta);

}  // namespace tpqr

#endif
