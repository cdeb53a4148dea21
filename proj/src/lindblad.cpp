#include "tpqr/lindblad.hpp"

#include <cmath>

#include "tpqr/linalg.hpp"

namespace tpqr {

void DissipationRates::validate() const {
    if (gamma < 0 || kappa < 0)
        throw std::invalid_argument("DissipationRates: rates must be >= 0");
}

int RetainedBasis::retained_index(Parity p, int j) const {
    if (j < 0 || j >= m_per_parity)
        throw std::out_of_range("RetainedBasis: index " + std::to_string(j) + " out of range");
    return (p == Parity::Even ? 0 : m_per_parity) + j;
}

RetainedBasis retain_levels(const DressedSpectrum& spectrum, int m_per_parity) {
    if (m_per_parity < 1)
        throw std::invalid_argument("retain_levels: m_per_parity must be >= 1");
    if (m_per_parity > int(spectrum.even.size()) || m_per_parity > int(spectrum.odd.size()))
        throw std::invalid_argument("retain_levels: fewer levels available than requested");

    const int dim = spectrum.space.dim;
    RetainedBasis b;
    b.m_per_parity = m_per_parity;
    b.energies.resize(2 * m_per_parity);
    b.states.resize(dim, 2 * m_per_parity);
    for (int j = 0; j < m_per_parity; ++j) {
        b.energies[j] = spectrum.even[size_t(j)].energy;
        b.states.col(j) = spectrum.even[size_t(j)].state;
        b.parity.push_back(Parity::Even);
        b.index_within_parity.push_back(j);
    }
    for (int j = 0; j < m_per_parity; ++j) {
        b.energies[m_per_parity + j] = spectrum.odd[size_t(j)].energy;
        b.states.col(m_per_parity + j) = spectrum.odd[size_t(j)].state;
        b.parity.push_back(Parity::Odd);
        b.index_within_parity.push_back(j);
    }
    return b;
}

RateTables transition_rates(const DressedSpectrum& spectrum, const RetainedBasis& basis,
                            const DissipationRates& rates) {
    rates.validate();
    const auto& space = spectrum.space;
    const double omega_c = spectrum.params.omega_c;
    const double omega_q = spectrum.params.omega_q;

    const Matrix a = annihilation(space).matrix;
    const Matrix sm = pauli(space, PauliKind::Minus).matrix;
    const Matrix a_ch = basis.states.adjoint() * (a - a.adjoint()) * basis.states;
    const Matrix s_ch = basis.states.adjoint() * (sm - sm.adjoint()) * basis.states;

    const int n = basis.size();
    RateTables t;
    t.gamma_table = RealMatrix::Zero(n, n);
    t.kappa_table = RealMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double delta = basis.energies[k] - basis.energies[j];
            if (delta <= 0) continue;  // Theta gate: strictly downward only
            t.gamma_table(j, k) = rates.gamma * (delta / omega_c) * std::norm(a_ch(j, k));
            t.kappa_table(j, k) = rates.kappa * (delta / omega_q) * std::norm(s_ch(j, k));
        }
    }
    return t;
}

LindbladModel build_dissipator([[maybe_unused]] const DressedSpectrum& spectrum, const RetainedBasis& basis,
                               const RateTables& tables) {
    const int n = basis.size();
    LindbladModel model;
    model.basis = basis;
    model.rates = tables;
    model.h_eff = basis.energies.cast<Complex>().asDiagonal();

    Matrix diss = Matrix::Zero(n * n, n * n);
    const Matrix id = Matrix::Identity(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double w = tables.gamma_table(j, k) + tables.kappa_table(j, k);
            if (w <= 0) continue;
            model.jumps.push_back({j, k, w});
            // D[|j><k|] rho = O rho O^dag - (1/2){O^dag O, rho} with O = |j><k|
            Matrix o = Matrix::Zero(n, n);
            o(j, k) = 1.0;
            const Matrix odo = o.adjoint() * o;  // |k><k|
            diss += w * (linalg::kron(o.conjugate(), o) -
                         0.5 * (linalg::kron(id, odo) + linalg::kron(odo.transpose(), id)));
        }
    }
    model.dissipator = std::move(diss);
    return model;
}

Matrix drive_operator(const DressedSpectrum& spectrum, const RetainedBasis& basis,
                      DriveChannel channel) {
    const auto& space = spectrum.space;
    Matrix c;
    if (channel == DriveChannel::Cavity)
        c = annihilation(space).matrix;
    else
        c = pauli(space, PauliKind::Minus).matrix;
    const Matrix cd = c + c.adjoint();
    return basis.states.adjoint() * cd * basis.states;
}

Matrix LiouvillianParts::at_time(double t) const {
    const Complex ph = std::exp(Complex(0, -omega_d * t));
    return L0 + ph * Lplus + std::conj(ph) * Lminus;
}

LiouvillianParts liouvillian(const LindbladModel& model, const DressedSpectrum& spectrum,
                             const DriveConfig& drive) {
    drive.validate();
    LiouvillianParts parts;
    parts.dim = model.basis.size();
    parts.omega_d = drive.omega_d;
    parts.L0 = linalg::commutator_superop(model.h_eff) + model.dissipator;
    const Matrix c = drive_operator(spectrum, model.basis, drive.channel);
    parts.Lplus = 0.5 * drive.amplitude * linalg::commutator_superop(c);
    parts.Lminus = parts.Lplus;
    return parts;
}

OutputFieldOperator output_field(const DressedSpectrum& spectrum, const RetainedBasis& basis) {
    const auto& space = spectrum.space;
    const Matrix a = annihilation(space).matrix;
    const Matrix ix = basis.states.adjoint() * (Complex(0, 1) * (a.adjoint() - a)) * basis.states;

    const int n = basis.size();
    OutputFieldOperator out;
    out.x_plus = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double delta = basis.energies[k] - basis.energies[j];
            if (delta > 0) out.x_plus(j, k) = delta * ix(j, k);
        }
    out.x_minus = out.x_plus.adjoint();
    return out;
}

}  // namespace tpqr
