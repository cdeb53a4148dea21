#include <doctest.h>

#include <algorithm>

#include "tpqr/linalg.hpp"
#include "tpqr/model.hpp"

using namespace tpqr;

namespace {

EffectiveModelParams params_at(double g2, double omega_q = 2.0) {
    EffectiveModelParams p;
    p.omega_c = 1.0;
    p.omega_q = omega_q;
    p.g2 = g2;
    return p;
}

DressedSpectrum spectrum_at(double g2, int n_max = 40) {
    const auto p = params_at(g2);
    const auto s = make_space(n_max);
    return dressed_spectrum(build_hamiltonian(p, s), p);
}

std::vector<const DressedLevel*> lowest_levels(const DressedSpectrum& sp, int count) {
    std::vector<const DressedLevel*> all;
    for (const auto& l : sp.even) all.push_back(&l);
    for (const auto& l : sp.odd) all.push_back(&l);
    std::sort(all.begin(), all.end(),
              [](const DressedLevel* a, const DressedLevel* b) { return a->energy < b->energy; });
    all.resize(size_t(count));
    return all;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("decoupled limit reproduces the bare ladder") {
    const auto space = make_space(20);
    auto p = params_at(0.0);
    const auto h = build_hamiltonian(p, space);
    auto es = linalg::eigh(h.matrix);
    CHECK(es.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    for (int i = 0; i < es.values.size(); ++i) {
        const double e = es.values[i];
        bool matches = false;
        for (int n = 0; n <= space.n_max && !matches; ++n)
            matches = std::abs(e - (n + 1.0)) < 1e-10 || std::abs(e - (n - 1.0)) < 1e-10;
        CHECK(matches);
    }
}

TEST_CASE("hamiltonian is hermitian and parity-commuting for generic params") {
    const auto space = make_space(25);
    EffectiveModelParams p = params_at(0.19, 1.7);
    p.g4 = 3e-4;
    p.omega_quartic = 2e-3;
    const auto h = build_hamiltonian(p, space);
    const double scale = h.matrix.cwiseAbs().maxCoeff();
    CHECK((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const Matrix pi = photon_parity(space).matrix;
    CHECK((h.matrix * pi - pi * h.matrix).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("dressed spectrum at g2 = 0 gives product states") {
    const auto sp = spectrum_at(0.0, 20);
    const auto& ground = sp.level(Parity::Even, 0);
    CHECK(ground.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(ground.state[sp.space.index(0, 0)]) == doctest::Approx(1.0).epsilon(1e-12));
    const auto& odd0 = sp.level(Parity::Odd, 0);
    CHECK(odd0.energy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(odd0.state[sp.space.index(1, 0)]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity purity of all returned levels at g2 = 0.2") {
    const auto sp = spectrum_at(0.2, 40);
    const Matrix pi = photon_parity(sp.space).matrix;
    for (const auto& sec : {sp.even, sp.odd})
        for (const auto& l : sec) {
            const double purity = std::abs(std::real(l.state.dot(pi * l.state)));
            CHECK(purity > 0.999);
        }
}

TEST_CASE("phase convention: largest component real positive") {
    const auto sp = spectrum_at(0.17, 30);
    for (const auto& l : {sp.level(Parity::Even, 3), sp.level(Parity::Odd, 5)}) {
        int imax = 0;
        for (int i = 1; i < l.state.size(); ++i)
            if (std::abs(l.state[i]) > std::abs(l.state[imax])) imax = i;
        CHECK(std::abs(std::imag(l.state[imax])) < 1e-12);
        CHECK(std::real(l.state[imax]) > 0);
    }
}

TEST_CASE("non-hermitian input is rejected") {
    const auto space = make_space(5);
    Matrix bad = Matrix::Zero(space.dim, space.dim);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(dressed_spectrum(LabeledOperator(space, bad), params_at(0.0)),
                    std::invalid_argument);
}

TEST_CASE("eigenvalue convergence in n_max up to the collapse vicinity") {
    // the default working cutoff is 80: doubling it moves the 10 lowest
    // levels by far less than 1e-6 even at g2 = 0.23, where n_max = 40 is
    // visibly unconverged (checked below as a guard against regressions)
    for (double g2 : {0.1, 0.23}) {
        const auto sp1 = spectrum_at(g2, 80);
        const auto sp2 = spectrum_at(g2, 160);
        for (int j = 0; j < 5; ++j) {
            CHECK(std::abs(sp1.energy(Parity::Even, j) - sp2.energy(Parity::Even, j)) < 1e-6);
            CHECK(std::abs(sp1.energy(Parity::Odd, j) - sp2.energy(Parity::Odd, j)) < 1e-6);
        }
    }
    const auto lo = spectrum_at(0.23, 40);
    const auto hi = spectrum_at(0.23, 160);
    double dev = 0;
    for (int j = 0; j < 5; ++j)
        dev = std::max(dev, std::abs(lo.energy(Parity::Odd, j) - hi.energy(Parity::Odd, j)));
    CHECK(dev > 1e-6);
}

TEST_CASE("level crossing near g2 = 0.17 omega_c") {
    const auto space = make_space(40);
    const double g_cross = find_level_crossing(params_at(0.0), 0.10, 0.25, space);
    CHECK(std::abs(g_cross - 0.17) < 0.01);

    // independent of the initial bracket width to the bisection tolerance
    const double g_cross2 = find_level_crossing(params_at(0.0), 0.15, 0.20, space);
    CHECK(std::abs(g_cross - g_cross2) < 2e-4);

    CHECK_THROWS_AS(find_level_crossing(params_at(0.0), 0.01, 0.05, space), NotFoundError);
}

TEST_CASE("drive frequency selector") {
    const auto sp0 = spectrum_at(0.0);
    CHECK(drive_frequency(sp0, {Parity::Even, 0}, {Parity::Even, 2}) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(drive_frequency(sp0, {Parity::Even, 0}, {Parity::Even, 0}) == 0.0);
    CHECK_THROWS_AS(drive_frequency(sp0, {Parity::Even, 0}, {Parity::Even, 9999}),
                    std::out_of_range);

    const auto sp = spectrum_at(0.1);
    const double wd = drive_frequency(sp, {Parity::Even, 0}, {Parity::Even, 2});
    CHECK(wd == doctest::Approx(2.0901).epsilon(1e-3));
}

TEST_CASE("collapse diagnostic") {
    const auto space = make_space(40);
    const auto rows = collapse_diagnostic(params_at(0.0), {0.0, 0.10, 0.20, 0.23}, space);

    // enumeration oracle for the bare point: even-sector energies are
    // {n - 1, n + 1 : n even} sorted, so the 5 lowest gaps are (2, 0, 2, 0, 2)
    std::vector<double> bare;
    for (int n = 0; n <= space.n_max; n += 2) {
        bare.push_back(n - 1.0);
        bare.push_back(n + 1.0);
    }
    std::sort(bare.begin(), bare.end());
    double oracle = 0;
    for (int j = 0; j < 5; ++j) oracle += bare[size_t(j) + 1] - bare[size_t(j)];
    oracle /= 5.0;
    CHECK(oracle == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(rows[0].mean_gap == doctest::Approx(oracle).epsilon(1e-10));

    CHECK(rows[3].mean_gap < rows[2].mean_gap);
    CHECK(rows[2].mean_gap < rows[1].mean_gap);

    CHECK_THROWS_AS(collapse_diagnostic(params_at(0.0), {0.26}, space), RegimeError);
}

TEST_CASE("RWA selection-rule matrix elements vs coupling strength") {
    const auto space = make_space(40);
    const Matrix a = annihilation(space).matrix;
    const Matrix sm = pauli(space, PauliKind::Minus).matrix;

    const auto weak = spectrum_at(0.005);
    const Vector& p1w = weak.level(Parity::Even, 1).state;
    const Vector& p2w = weak.level(Parity::Even, 2).state;
    CHECK(std::abs(p2w.dot(a * p1w)) < 1e-2);
    CHECK(std::abs(p2w.dot(sm * p1w)) < 1e-2);

    const auto usc = spectrum_at(0.1);
    const Vector& p1u = usc.level(Parity::Even, 1).state;
    const Vector& p2u = usc.level(Parity::Even, 2).state;
    const double m_a = std::abs(p2u.dot(a * p1u));
    const double m_sm = std::abs(p2u.dot(sm * p1u));
    CHECK(std::max(m_a, m_sm) > 5e-2);
}

TEST_CASE("weighted-excitation conservation in the RWA regime") {
    // the combination conserved by the rotating-wave part of the two-photon
    // coupling is n-hat + sigma_z (a photon pair against one qubit flip)
    const auto space = make_space(40);
    const auto sp = spectrum_at(0.005);
    const Matrix nw = number(space).matrix + pauli(space, PauliKind::Z).matrix;
    const Matrix nw2 = nw * nw;
    for (const DressedLevel* l : lowest_levels(sp, 6)) {
        const double m1 = std::real(l->state.dot(nw * l->state));
        const double m2 = std::real(l->state.dot(nw2 * l->state));
        CHECK(m2 - m1 * m1 < 1e-3);
    }
}

TEST_CASE("spectrum symmetric under the sign of g2") {
    const auto space = make_space(30);
    EffectiveModelParams p = params_at(0.15);
    p.g4 = 1e-4;
    const auto h = build_hamiltonian(p, space);

    const Matrix a = annihilation(space).matrix;
    const Matrix x2 = (a + a.adjoint()) * (a + a.adjoint());
    const Matrix x4 = x2 * x2;
    const Matrix sx = pauli(space, PauliKind::X).matrix;
    const Matrix sz = pauli(space, PauliKind::Z).matrix;
    Matrix h_neg = number(space).matrix + 0.5 * p.omega_q * sz - p.g2 * (sx * x2) -
                   p.g4 * (sx * x4);
    h_neg = 0.5 * (h_neg + h_neg.adjoint()).eval();
    CHECK((sz * h.matrix * sz - h_neg).cwiseAbs().maxCoeff() < 1e-12);

    auto e1 = linalg::eigh(h.matrix).values;
    auto e2 = linalg::eigh(h_neg).values;
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_SUITE_END();
