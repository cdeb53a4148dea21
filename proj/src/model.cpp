#include "tpqr/model.hpp"

#include <algorithm>
#include <cmath>

#include "tpqr/linalg.hpp"

namespace tpqr {

void EffectiveModelParams::validate() const {
    if (!(omega_c > 0) || !(omega_q > 0))
        throw std::invalid_argument("EffectiveModelParams: omega_c and omega_q must be > 0");
    if (g2 < 0) throw std::invalid_argument("EffectiveModelParams: g2 must be >= 0");
    if (!std::isfinite(g4) || !std::isfinite(omega_quartic))
        throw std::invalid_argument("EffectiveModelParams: g4 and omega_quartic must be finite");
}

void DriveConfig::validate() const {
    if (amplitude < 0) throw std::invalid_argument("DriveConfig: amplitude must be >= 0");
    if (!(omega_d > 0)) throw std::invalid_argument("DriveConfig: omega_d must be > 0");
}

const DressedLevel& DressedSpectrum::level(Parity p, int j) const {
    const auto& s = sector(p);
    if (j < 0 || j >= int(s.size()))
        throw std::out_of_range("DressedSpectrum: level index " + std::to_string(j) +
                                " out of range for parity sector of size " +
                                std::to_string(s.size()));
    return s[size_t(j)];
}

LabeledOperator build_hamiltonian(const EffectiveModelParams& params,
                                  const SpaceDescriptor& space) {
    params.validate();
    const auto a = annihilation(space);
    const Matrix x = a.matrix + a.matrix.adjoint();
    const Matrix x2 = x * x;
    const Matrix x4 = x2 * x2;
    const Matrix sx = pauli(space, PauliKind::X).matrix;
    const Matrix sz = pauli(space, PauliKind::Z).matrix;

    Matrix h = params.omega_c * number(space).matrix + 0.5 * params.omega_q * sz +
               params.g2 * (sx * x2) + params.g4 * (sx * x4) - params.omega_quartic * x4;
    // the sigma_x products are built from commuting factors, symmetrize roundoff away
    h = 0.5 * (h + h.adjoint()).eval();
    return {space, std::move(h)};
}

namespace {

// Diagonalize one parity block and embed the eigenvectors back into the
// full space. Degenerate clusters are resolved by diagonalizing the photon
// number operator inside the cluster.
std::vector<DressedLevel> sector_levels(const Matrix& h, const SpaceDescriptor& space,
                                        int parity_bit, double scale) {
    std::vector<int> idx;
    for (int i = 0; i < space.dim; ++i)
        if (space.photon_of(i) % 2 == parity_bit) idx.push_back(i);
    const int nb = int(idx.size());

    Matrix block(nb, nb);
    for (int c = 0; c < nb; ++c)
        for (int r = 0; r < nb; ++r) block(r, c) = h(idx[size_t(r)], idx[size_t(c)]);
    auto es = linalg::eigh(block);

    // cluster nearly-degenerate eigenvalues and rotate into n-hat eigenstates
    const double tol = 1e-9 * scale;
    int start = 0;
    while (start < nb) {
        int end = start + 1;
        while (end < nb && es.values[end] - es.values[end - 1] < tol) ++end;
        const int w = end - start;
        if (w > 1) {
            Matrix sub = es.vectors.middleCols(start, w);
            Matrix nproj(w, w);
            for (int c = 0; c < w; ++c)
                for (int r = 0; r < w; ++r) {
                    Complex acc = 0;
                    for (int k = 0; k < nb; ++k)
                        acc += std::conj(sub(k, r)) * double(space.photon_of(idx[size_t(k)])) *
                               sub(k, c);
                    nproj(r, c) = acc;
                }
            auto nes = linalg::eigh(0.5 * (nproj + nproj.adjoint()));
            es.vectors.middleCols(start, w) = sub * nes.vectors;
        }
        start = end;
    }

    std::vector<DressedLevel> out;
    out.reserve(size_t(nb));
    for (int j = 0; j < nb; ++j) {
        Vector v = Vector::Zero(space.dim);
        for (int k = 0; k < nb; ++k) v[idx[size_t(k)]] = es.vectors(k, j);
        // deterministic global phase: largest-magnitude component real positive
        int imax = 0;
        double amax = -1;
        for (int k = 0; k < space.dim; ++k)
            if (std::abs(v[k]) > amax + 1e-15) {
                amax = std::abs(v[k]);
                imax = k;
            }
        if (amax > 0) v *= std::conj(v[imax]) / std::abs(v[imax]);
        v.normalize();
        out.push_back({es.values[j], std::move(v)});
    }
    return out;
}

}  // namespace

DressedSpectrum dressed_spectrum(const LabeledOperator& h, const EffectiveModelParams& params) {
    const auto& space = h.space;
    const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
    if ((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("dressed_spectrum: Hamiltonian is not Hermitian");
    const Matrix pi = photon_parity(space).matrix;
    if ((h.matrix * pi - pi * h.matrix).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("dressed_spectrum: Hamiltonian does not commute with parity");

    DressedSpectrum sp;
    sp.params = params;
    sp.space = space;
    sp.even = sector_levels(h.matrix, space, 0, scale);
    sp.odd = sector_levels(h.matrix, space, 1, scale);
    return sp;
}

double find_level_crossing(const EffectiveModelParams& params_template, double g2_lo,
                           double g2_hi, const SpaceDescriptor& space) {
    if (!(g2_lo < g2_hi)) throw std::invalid_argument("find_level_crossing: empty range");
    auto split = [&](double g2) {
        EffectiveModelParams p = params_template;
        p.g2 = g2;
        auto sp = dressed_spectrum(build_hamiltonian(p, space), p);
        return sp.energy(Parity::Even, 2) - sp.energy(Parity::Odd, 1);
    };
    double flo = split(g2_lo);
    double fhi = split(g2_hi);
    if (flo == 0) return g2_lo;
    if (fhi == 0) return g2_hi;
    if ((flo > 0) == (fhi > 0))
        throw NotFoundError("find_level_crossing: no sign change of E_2^+ - E_1^- in range [" +
                            std::to_string(g2_lo) + ", " + std::to_string(g2_hi) + "]");
    const double tol = 1e-4 * params_template.omega_c;
    double lo = g2_lo, hi = g2_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = split(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double drive_frequency(const DressedSpectrum& spectrum, std::pair<Parity, int> from,
                       std::pair<Parity, int> to) {
    return spectrum.energy(to.first, to.second) - spectrum.energy(from.first, from.second);
}

void refuse_beyond_collapse(double g2, double omega_c) {
    if (g2 > collapse_refusal_fraction * omega_c * (1 + 1e-12))
        throw RegimeError("coupling g2 = " + std::to_string(g2 / omega_c) +
                          " omega_c is at or beyond the spectral-collapse point; the truncated "
                          "basis has no convergent eigenstructure there");
}

std::vector<CollapseRow> collapse_diagnostic(const EffectiveModelParams& params_template,
                                             const std::vector<double>& g2_grid,
                                             const SpaceDescriptor& space) {
    for (double g2 : g2_grid) refuse_beyond_collapse(g2, params_template.omega_c);
    std::vector<CollapseRow> rows;
    rows.reserve(g2_grid.size());
    for (double g2 : g2_grid) {
        EffectiveModelParams p = params_template;
        p.g2 = g2;
        auto sp = dressed_spectrum(build_hamiltonian(p, space), p);
        double acc = 0;
        for (int j = 0; j < 5; ++j)
            acc += sp.energy(Parity::Even, j + 1) - sp.energy(Parity::Even, j);
        rows.push_back({g2, acc / 5.0});
    }
    return rows;
}

}  // namespace tpqr
