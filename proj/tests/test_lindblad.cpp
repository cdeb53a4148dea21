#include <doctest.h>

#include <random>

#include "tpqr/floquet.hpp"
#include "tpqr/linalg.hpp"
#include "tpqr/lindblad.hpp"

using namespace tpqr;

namespace {

struct Setup {
    DressedSpectrum spectrum;
    RetainedBasis basis;
    RateTables tables;
    LindbladModel model;
    DissipationRates rates;
};

Setup make_setup(double g2, int m_per_parity, int n_max = 40) {
    EffectiveModelParams p;
    p.omega_c = 1.0;
    p.omega_q = 2.0;
    p.g2 = g2;
    Setup s;
    s.spectrum = dressed_spectrum(build_hamiltonian(p, make_space(n_max)), p);
    s.basis = retain_levels(s.spectrum, m_per_parity);
    s.rates.gamma = 1e-3;
    s.rates.kappa = 2e-3;  // kappa/omega_q = 1e-3
    s.tables = transition_rates(s.spectrum, s.basis, s.rates);
    s.model = build_dissipator(s.spectrum, s.basis, s.tables);
    return s;
}

Matrix random_hermitian(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (m + m.adjoint()).eval();
}

}  // namespace

TEST_SUITE_BEGIN("lindblad");

TEST_CASE("bare-limit rates") {
    auto s = make_setup(0.0, 6);
    // |1,g> -> |0,g> is the (odd,0) -> (even,0) channel with unit element
    const int j = s.basis.retained_index(Parity::Even, 0);
    const int k = s.basis.retained_index(Parity::Odd, 0);
    CHECK(s.tables.gamma_table(j, k) == doctest::Approx(1e-3).epsilon(1e-10));
    CHECK(s.tables.kappa_table(j, k) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("selection rules at g2 = 0") {
    auto s = make_setup(0.0, 6);
    const int m = s.basis.size();
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) {
            if (s.basis.parity[size_t(j)] == s.basis.parity[size_t(k)])
                CHECK(s.tables.gamma_table(j, k) == 0.0);  // (a - a^dag) flips parity
            else
                CHECK(s.tables.kappa_table(j, k) == 0.0);  // (s- - s+) preserves it
        }
}

TEST_CASE("outflow from the driven level matches a brute-force evaluation") {
    auto s = make_setup(0.1, 8);
    const int k2 = s.basis.retained_index(Parity::Even, 2);

    // duplicate implementation straight from the definition
    const auto& space = s.spectrum.space;
    const Matrix a = annihilation(space).matrix;
    const Matrix sm = pauli(space, PauliKind::Minus).matrix;
    const Matrix ach = a - a.adjoint();
    const Matrix sch = sm - sm.adjoint();
    const Vector psi_k = s.spectrum.level(Parity::Even, 2).state;
    const double ek = s.spectrum.energy(Parity::Even, 2);
    double brute = 0.0;
    for (Parity p : {Parity::Even, Parity::Odd})
        for (int j = 0; j < s.basis.m_per_parity; ++j) {
            const double delta = ek - s.spectrum.energy(p, j);
            if (delta <= 0) continue;
            const Vector psi_j = s.spectrum.level(p, j).state;
            brute += 1e-3 * delta * std::norm(psi_j.dot(ach * psi_k));
            brute += 2e-3 * (delta / 2.0) * std::norm(psi_j.dot(sch * psi_k));
        }

    double outflow = 0.0;
    for (const auto& jump : s.model.jumps)
        if (jump.from == k2) outflow += jump.rate;
    CHECK(outflow == doctest::Approx(brute).epsilon(1e-12));
    CHECK(outflow > 0.0);
}

TEST_CASE("theta gating and nonnegative weights") {
    auto s = make_setup(0.17, 8);
    for (const auto& jump : s.model.jumps) {
        CHECK(jump.rate > 0.0);
        CHECK(s.basis.energies[jump.from] > s.basis.energies[jump.to]);  // strictly downward
    }
    CHECK(s.tables.gamma_table.minCoeff() >= 0.0);
    CHECK(s.tables.kappa_table.minCoeff() >= 0.0);
}

TEST_CASE("dissipator annihilates the dark ground state and preserves trace") {
    auto s = make_setup(0.12, 6);
    const int m = s.basis.size();
    Matrix ground = Matrix::Zero(m, m);
    ground(0, 0) = 1.0;
    CHECK((s.model.dissipator * linalg::vec(ground)).cwiseAbs().maxCoeff() < 1e-14);

    for (unsigned seed = 0; seed < 20; ++seed) {
        const Matrix rho = random_hermitian(m, seed);
        const Matrix drho = linalg::unvec(s.model.dissipator * linalg::vec(rho), m, m);
        CHECK(std::abs(drho.trace()) < 1e-12);
    }
}

TEST_CASE("population decay of the lowest odd level is a single-channel exponential") {
    auto s = make_setup(0.1, 6);
    const int m = s.basis.size();
    const int idx = s.basis.retained_index(Parity::Odd, 0);
    const int gnd = s.basis.retained_index(Parity::Even, 0);
    const double rate =
        s.tables.gamma_table(gnd, idx) + s.tables.kappa_table(gnd, idx);

    DriveConfig off;
    off.amplitude = 0.0;
    off.omega_d = 2.0;
    const auto parts = liouvillian(s.model, s.spectrum, off);

    Matrix rho0 = Matrix::Zero(m, m);
    rho0(idx, idx) = 1.0;
    RealVector times(3);
    times << 200.0, 600.0, 1200.0;
    const auto traj = time_domain_propagate(parts, rho0, 0.0, times);
    for (int i = 0; i < times.size(); ++i) {
        const double pop = std::real(traj[size_t(i)](idx, idx));
        CHECK(pop == doctest::Approx(std::exp(-rate * times[i])).epsilon(1e-5));
    }
}

TEST_CASE("liouvillian fourier pieces") {
    auto s = make_setup(0.1, 5);
    const int m = s.basis.size();

    DriveConfig off;
    off.amplitude = 0.0;
    off.omega_d = 2.0;
    const auto p0 = liouvillian(s.model, s.spectrum, off);
    CHECK(p0.Lplus.cwiseAbs().maxCoeff() == 0.0);
    CHECK(p0.Lminus.cwiseAbs().maxCoeff() == 0.0);

    DriveConfig drv;
    drv.amplitude = 1e-3;
    drv.omega_d = drive_frequency(s.spectrum, {Parity::Even, 0}, {Parity::Even, 2});
    drv.channel = DriveChannel::Qubit;
    const auto parts = liouvillian(s.model, s.spectrum, drv);
    CHECK((parts.at_time(0.0) - (parts.L0 + parts.Lplus + parts.Lminus)).cwiseAbs().maxCoeff() <
          1e-15);

    // commutator action against a direct evaluation
    const Matrix rho = random_hermitian(m, 7);
    const Matrix h = s.model.h_eff;
    const Matrix direct = Complex(0, -1) * (h * rho - rho * h);
    const Matrix via_super =
        linalg::unvec(linalg::commutator_superop(h) * linalg::vec(rho), m, m);
    CHECK((direct - via_super).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("output field structure") {
    auto s = make_setup(0.0, 6);
    const auto out = output_field(s.spectrum, s.basis);
    CHECK((out.x_minus - out.x_plus.adjoint()).cwiseAbs().maxCoeff() == 0.0);

    // bare limit: |1,g> -> |0,g> element has magnitude omega_c
    const int j = s.basis.retained_index(Parity::Even, 0);
    const int k = s.basis.retained_index(Parity::Odd, 0);
    CHECK(std::abs(out.x_plus(j, k)) == doctest::Approx(1.0).epsilon(1e-10));

    // lowering structure: the dressed ground state is annihilated
    Vector e0 = Vector::Zero(s.basis.size());
    e0[j] = 1.0;
    CHECK((out.x_plus * e0).norm() == 0.0);
    CHECK((out.x_plus * out.x_plus * e0).norm() == 0.0);
}

TEST_CASE("output field parity bookkeeping and duplicate-implementation oracle") {
    auto s = make_setup(0.15, 8);
    const auto out = output_field(s.spectrum, s.basis);
    const auto& space = s.spectrum.space;
    const Matrix ixd = Complex(0, 1) * (creation(space).matrix - annihilation(space).matrix);

    const int m = s.basis.size();
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) {
            // same-parity elements vanish
            if (s.basis.parity[size_t(j)] == s.basis.parity[size_t(k)])
                CHECK(std::abs(out.x_plus(j, k)) < 1e-14);
            // explicit eigenpair oracle
            const double delta = s.basis.energies[k] - s.basis.energies[j];
            Complex expected = 0;
            if (delta > 0)
                expected = delta * s.basis.states.col(j).dot(ixd * s.basis.states.col(k));
            CHECK(std::abs(out.x_plus(j, k) - expected) < 1e-12);
        }
}

TEST_CASE("undriven relaxation reaches the dressed ground state") {
    auto s = make_setup(0.2, 4);
    const int m = s.basis.size();
    DriveConfig off;
    off.amplitude = 0.0;
    off.omega_d = 2.0;
    const auto parts = liouvillian(s.model, s.spectrum, off);

    Matrix rho0 = random_hermitian(m, 3);
    rho0 = (rho0 * rho0).eval();  // positive
    rho0 /= rho0.trace();

    const auto part = build_period_partition(parts, 8, 600);
    Vector v = linalg::vec(rho0);
    const double period = 2 * M_PI / parts.omega_d;
    const int n_periods = int(std::ceil(50.0 / s.rates.gamma / period));
    for (int q = 0; q < n_periods; ++q)
        for (const auto& u : part.maps) v = u * v;
    const Matrix rho = linalg::unvec(v, m, m);
    CHECK(std::real(rho(0, 0)) > 1.0 - 1e-6);
}

TEST_SUITE_END();
