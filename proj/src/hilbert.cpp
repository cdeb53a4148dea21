#include "tpqr/hilbert.hpp"

#include <cmath>

namespace tpqr {

SpaceDescriptor make_space(int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("make_space: n_max must be >= 1, got " +
                                    std::to_string(n_max));
    return {n_max, 2 * (n_max + 1)};
}

LabeledOperator::LabeledOperator(SpaceDescriptor s, Matrix m) : space(s), matrix(std::move(m)) {
    if (matrix.rows() != space.dim || matrix.cols() != space.dim)
        throw std::invalid_argument("LabeledOperator: matrix does not match space dimension");
}

static void check_same_space(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    if (a != b)
        throw std::invalid_argument("LabeledOperator: operands live on different spaces");
}

LabeledOperator LabeledOperator::operator+(const LabeledOperator& o) const {
    check_same_space(space, o.space);
    return {space, matrix + o.matrix};
}

LabeledOperator LabeledOperator::operator-(const LabeledOperator& o) const {
    check_same_space(space, o.space);
    return {space, matrix - o.matrix};
}

LabeledOperator LabeledOperator::operator*(const LabeledOperator& o) const {
    check_same_space(space, o.space);
    return {space, matrix * o.matrix};
}

LabeledOperator annihilation(const SpaceDescriptor& space) {
    Matrix m = Matrix::Zero(space.dim, space.dim);
    for (int n = 1; n <= space.n_max; ++n)
        for (int q = 0; q < 2; ++q)
            m(space.index(n - 1, q), space.index(n, q)) = std::sqrt(double(n));
    return {space, std::move(m)};
}

LabeledOperator creation(const SpaceDescriptor& space) { return annihilation(space).adjoint(); }

LabeledOperator number(const SpaceDescriptor& space) {
    Matrix m = Matrix::Zero(space.dim, space.dim);
    for (int n = 0; n <= space.n_max; ++n)
        for (int q = 0; q < 2; ++q)
            m(space.index(n, q), space.index(n, q)) = double(n);
    return {space, std::move(m)};
}

LabeledOperator pauli(const SpaceDescriptor& space, PauliKind which) {
    Matrix m = Matrix::Zero(space.dim, space.dim);
    for (int n = 0; n <= space.n_max; ++n) {
        const int g = space.index(n, 0);
        const int e = space.index(n, 1);
        switch (which) {
            case PauliKind::X:
                m(g, e) = 1.0;
                m(e, g) = 1.0;
                break;
            case PauliKind::Z:
                m(g, g) = -1.0;
                m(e, e) = +1.0;
                break;
            case PauliKind::Plus:  // |e><g|
                m(e, g) = 1.0;
                break;
            case PauliKind::Minus:  // |g><e|
                m(g, e) = 1.0;
                break;
        }
    }
    return {space, std::move(m)};
}

LabeledOperator photon_parity(const SpaceDescriptor& space) {
    Matrix m = Matrix::Zero(space.dim, space.dim);
    for (int n = 0; n <= space.n_max; ++n) {
        const double p = (n % 2 == 0) ? 1.0 : -1.0;
        for (int q = 0; q < 2; ++q) m(space.index(n, q), space.index(n, q)) = p;
    }
    return {space, std::move(m)};
}

LabeledOperator identity_op(const SpaceDescriptor& space) {
    return {space, Matrix::Identity(space.dim, space.dim)};
}

}  // namespace tpqr
