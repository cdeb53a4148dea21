#ifndef TPQR_LINDBLAD_HPP
#define TPQR_LINDBLAD_HPP

#include <vector>

#include "tpqr/model.hpp"

namespace tpqr {

struct DissipationRates {
    double gamma = 1e-3;  // rate paired with the (a - a^dag) channel
    double kappa = 2e-3;  // rate paired with the (sigma- - sigma+) channel

    void validate() const;
};

// Retained dressed basis: the lowest m_per_parity levels of each parity
// sector, ordered even 0..M-1 then odd 0..M-1.
struct RetainedBasis {
    int m_per_parity = 12;
    RealVector energies;       // 2M entries in retained order
    Matrix states;             // full_dim x 2M, dressed columns
    std::vector<Parity> parity;
    std::vector<int> index_within_parity;

    int size() const { return int(energies.size()); }
    int retained_index(Parity p, int j) const;
};

RetainedBasis retain_levels(const DressedSpectrum& spectrum, int m_per_parity);

// Transition-rate tables over the retained levels; entry (j, k) is the rate
// of |k> -> |j>, nonzero only for E_k > E_j.
struct RateTables {
    RealMatrix gamma_table;  // photonic channel
    RealMatrix kappa_table;  // qubit channel
};

RateTables transition_rates(const DressedSpectrum& spectrum, const RetainedBasis& basis,
                            const DissipationRates& rates);

struct JumpChannel {
    int to;       // retained index j
    int from;     // retained index k
    double rate;  // Gamma + K of the channel
};

// Dressed-basis master-equation generator pieces on the retained subspace.
struct LindbladModel {
    RetainedBasis basis;
    RateTables rates;
    std::vector<JumpChannel> jumps;   // only rate > 0 channels
    Matrix h_eff;                     // diag(E_j) on the retained basis
    Matrix dissipator;                // superoperator on vec(rho), (2M)^2 square
};

LindbladModel build_dissipator(const DressedSpectrum& spectrum, const RetainedBasis& basis,
                               const RateTables& tables);

// Fourier pieces of the periodic generator
// L(t) = L0 + Lplus e^{-i omega_d t} + Lminus e^{+i omega_d t}.
struct LiouvillianParts {
    Matrix L0;
    Matrix Lplus;
    Matrix Lminus;
    double omega_d = 0.0;
    int dim = 0;  // retained Hilbert-space dimension (2M)

    Matrix at_time(double t) const;
};

LiouvillianParts liouvillian(const LindbladModel& model, const DressedSpectrum& spectrum,
                             const DriveConfig& drive);

// Positive-frequency output-field operator on the retained basis.
struct OutputFieldOperator {
    Matrix x_plus;
    Matrix x_minus;  // adjoint of x_plus
};

OutputFieldOperator output_field(const DressedSpectrum& spectrum, const RetainedBasis& basis);

// Drive operator (c + c^dag) projected onto the retained basis.
Matrix drive_operator(const DressedSpectrum& spectrum, const RetainedBasis& basis,
                      DriveChannel channel);

}  // namespace tpqr

#endif
