#ifndef TPQR_MODEL_HPP
#define TPQR_MODEL_HPP

#include <utility>
#include <vector>

#include "tpqr/hilbert.hpp"

namespace tpqr {

// Effective qubit-resonator model parameters, all in the same frequency
// units (hbar = 1). Internally everything is run with omega_c = 1.
struct EffectiveModelParams {
    double omega_c = 1.0;
    double omega_q = 2.0;
    double g2 = 0.0;
    double g4 = 0.0;
    double omega_quartic = 0.0;  // Kerr-like correction, enters as -Omega (a^dag + a)^4

    void validate() const;
};

enum class DriveChannel { Cavity, Qubit };

struct DriveConfig {
    double amplitude = 0.0;  // F in H(t) = H0 + F cos(omega_d t)(c + c^dag)
    double omega_d = 0.0;
    DriveChannel channel = DriveChannel::Qubit;

    void validate() const;
};

enum class Parity { Even, Odd };
inline char parity_label(Parity p) { return p == Parity::Even ? '+' : '-'; }

struct DressedLevel {
    double energy;
    Vector state;  // full-space components, normalized, fixed phase
};

// Parity-labeled, energy-sorted eigensystem of the undriven Hamiltonian.
struct DressedSpectrum {
    EffectiveModelParams params;
    SpaceDescriptor space;
    std::vector<DressedLevel> even;  // energy-ordered within the sector
    std::vector<DressedLevel> odd;

    const std::vector<DressedLevel>& sector(Parity p) const {
        return p == Parity::Even ? even : odd;
    }
    const DressedLevel& level(Parity p, int j) const;
    double energy(Parity p, int j) const { return level(p, j).energy; }
};

LabeledOperator build_hamiltonian(const EffectiveModelParams& params,
                                  const SpaceDescriptor& space);

// Full eigendecomposition with parity labels. The Hamiltonian is block
// diagonal in the photon-parity splitting of the product basis, so each
// sector is diagonalized separately; degenerate clusters are rotated into
// photon-number eigenstates and the global phase is fixed by making the
// largest-magnitude component real positive.
DressedSpectrum dressed_spectrum(const LabeledOperator& h,
                                 const EffectiveModelParams& params);

// g2 value where E_2^+ crosses E_1^-, located by bisection to 1e-4*omega_c.
// The supplied range must bracket exactly one sign change.
double find_level_crossing(const EffectiveModelParams& params_template, double g2_lo,
                           double g2_hi, const SpaceDescriptor& space);

double drive_frequency(const DressedSpectrum& spectrum, std::pair<Parity, int> from,
                       std::pair<Parity, int> to);

struct CollapseRow {
    double g2;
    double mean_gap;  // mean of the 5 lowest consecutive even-sector gaps
};

std::vector<CollapseRow> collapse_diagnostic(const EffectiveModelParams& params_template,
                                             const std::vector<double>& g2_grid,
                                             const SpaceDescriptor& space);

// Couplings at or beyond ~0.245*omega_c have no convergent truncated-basis
// eigenstructure; callers use this single gate.
inline constexpr double collapse_refusal_fraction = 0.245;
void refuse_beyond_collapse(double g2, double omega_c);

}  // namespace tpqr

#endif
