#include <doctest.h>

#include "tpqr/hilbert.hpp"

using namespace tpqr;

namespace {
double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_SUITE_BEGIN("hilbert");

TEST_CASE("space descriptor dimensions and errors") {
    CHECK(make_space(1).dim == 4);
    CHECK(make_space(20).dim == 42);
    CHECK_THROWS_AS(make_space(0), std::invalid_argument);
    CHECK_THROWS_AS(make_space(-3), std::invalid_argument);
}

TEST_CASE("basis ordering canary: photon-major, qubit minor") {
    const auto s = make_space(3);
    // |n, q> sits at index 2n + q with q = 0 for the qubit ground state
    CHECK(s.index(0, 0) == 0);
    CHECK(s.index(0, 1) == 1);
    CHECK(s.index(2, 1) == 5);
    CHECK(s.photon_of(5) == 2);
    CHECK(s.qubit_of(5) == 1);
    // sigma_z must be -1 on |0,g>
    const auto sz = pauli(s, PauliKind::Z);
    CHECK(sz.matrix(0, 0) == Complex(-1, 0));
    CHECK(sz.matrix(1, 1) == Complex(+1, 0));
}

TEST_CASE("annihilation acts as sqrt(n) lowering") {
    const auto s = make_space(1);
    const auto a = annihilation(s);
    Vector one_g = Vector::Zero(s.dim);
    one_g[s.index(1, 0)] = 1.0;
    Vector lowered = a.matrix * one_g;
    CHECK(std::abs(lowered[s.index(0, 0)] - Complex(1, 0)) < 1e-15);
    Vector zero_g = Vector::Zero(s.dim);
    zero_g[s.index(0, 0)] = 1.0;
    CHECK((a.matrix * zero_g).norm() == 0.0);
}

TEST_CASE("commutator [a, a^dag] is identity except the truncation edge") {
    const auto s = make_space(7);
    const auto a = annihilation(s);
    const auto ad = creation(s);
    const Matrix comm = (a * ad - ad * a).matrix;  // direct matrix multiplication oracle
    for (int n = 0; n <= s.n_max; ++n)
        for (int q = 0; q < 2; ++q) {
            const int i = s.index(n, q);
            const double expected = (n == s.n_max) ? -double(s.n_max) : 1.0;
            CHECK(std::abs(comm(i, i) - Complex(expected, 0)) < 1e-12);
        }
    Matrix off = comm;
    off.diagonal().setZero();
    CHECK(max_abs(off) < 1e-12);
}

TEST_CASE("number operator expectation") {
    const auto s = make_space(9);
    const Matrix n_op = (creation(s) * annihilation(s)).matrix;
    for (int n = 0; n <= s.n_max; ++n)
        CHECK(std::abs(n_op(s.index(n, 0), s.index(n, 0)) - Complex(n, 0)) < 1e-12);
}

TEST_CASE("pauli algebra") {
    const auto s = make_space(2);
    const auto sx = pauli(s, PauliKind::X);
    const auto sz = pauli(s, PauliKind::Z);
    const auto sp = pauli(s, PauliKind::Plus);
    const auto sm = pauli(s, PauliKind::Minus);
    const Matrix id = Matrix::Identity(s.dim, s.dim);

    CHECK(max_abs((sx * sx).matrix - id) < 1e-15);
    CHECK(max_abs((sp * sm + sm * sp).matrix - id) < 1e-15);
    CHECK(max_abs((sp + sm).matrix - sx.matrix) < 1e-15);

    // [sz, sx] = 2i sy with sy = -i(s+ - s-), verified entrywise
    const Matrix sy = Complex(0, -1) * (sp.matrix - sm.matrix);
    const Matrix comm = sz.matrix * sx.matrix - sx.matrix * sz.matrix;
    CHECK(max_abs(comm - Complex(0, 2) * sy) < 1e-15);
}

TEST_CASE("photon parity") {
    const auto s = make_space(5);
    const auto pi = photon_parity(s);
    CHECK(pi.matrix(s.index(0, 0), s.index(0, 0)) == Complex(1, 0));
    CHECK(pi.matrix(s.index(1, 1), s.index(1, 1)) == Complex(-1, 0));
    CHECK(max_abs((pi * pi).matrix - Matrix::Identity(s.dim, s.dim)) == 0.0);

    const auto a = annihilation(s);
    const auto n_op = creation(s) * a;
    const auto sz = pauli(s, PauliKind::Z);
    const auto sx = pauli(s, PauliKind::X);
    CHECK(max_abs((pi * n_op - n_op * pi).matrix) == 0.0);
    CHECK(max_abs((pi * sz - sz * pi).matrix) == 0.0);
    CHECK(max_abs((pi * sx - sx * pi).matrix) == 0.0);

    // parity commutes with (a + a^dag)^2 away from the truncation edge
    const Matrix x = a.matrix + a.matrix.adjoint();
    const Matrix x2 = x * x;
    const Matrix c = pi.matrix * x2 - x2 * pi.matrix;
    for (int n = 0; n + 4 <= s.n_max; ++n)
        for (int q = 0; q < 2; ++q)
            for (int i = 0; i < s.dim; ++i) CHECK(std::abs(c(i, s.index(n, q))) < 1e-12);
}

TEST_CASE("generated operators are finite and adjoint-consistent") {
    const auto s = make_space(30);
    for (const auto& op : {annihilation(s), creation(s), pauli(s, PauliKind::X),
                           pauli(s, PauliKind::Z), photon_parity(s)})
        CHECK(op.matrix.allFinite());
    CHECK(max_abs(annihilation(s).adjoint().matrix - creation(s).matrix) == 0.0);
}

TEST_CASE("operators on different spaces do not compose") {
    const auto s1 = make_space(3);
    const auto s2 = make_space(4);
    CHECK_THROWS_AS(annihilation(s1) * annihilation(s2), std::invalid_argument);
    CHECK_THROWS_AS(annihilation(s1) + annihilation(s2), std::invalid_argument);
}

TEST_SUITE_END();
