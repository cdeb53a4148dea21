#ifndef TPQR_HILBERT_HPP
#define TPQR_HILBERT_HPP

#include "tpqr/common.hpp"

namespace tpqr {

// Truncated Fock x qubit space. Basis ordering is photon-major:
// index i = 2*n + q with photon number n in [0, n_max] and qubit index
// q = 0 (ground) or q = 1 (excited). sigma_z|g> = -|g>, sigma_z|e> = +|e>.
struct SpaceDescriptor {
    int n_max = 0;
    int dim = 0;

    bool operator==(const SpaceDescriptor& o) const { return n_max == o.n_max; }
    bool operator!=(const SpaceDescriptor& o) const { return !(*this == o); }

    int index(int n, int q) const { return 2 * n + q; }
    int photon_of(int i) const { return i / 2; }
    int qubit_of(int i) const { return i % 2; }
};

SpaceDescriptor make_space(int n_max);

// Dense operator tagged with the space it acts on. Composition between
// operators on different spaces throws.
struct LabeledOperator {
    SpaceDescriptor space;
    Matrix matrix;

    LabeledOperator() = default;
    LabeledOperator(SpaceDescriptor s, Matrix m);

    LabeledOperator adjoint() const { return {space, matrix.adjoint()}; }

    LabeledOperator operator+(const LabeledOperator& o) const;
    LabeledOperator operator-(const LabeledOperator& o) const;
    LabeledOperator operator*(const LabeledOperator& o) const;
    friend LabeledOperator operator*(Complex c, const LabeledOperator& op) {
        return {op.space, c * op.matrix};
    }
    friend LabeledOperator operator*(double c, const LabeledOperator& op) {
        return {op.space, c * op.matrix};
    }
};

enum class PauliKind { X, Z, Plus, Minus };

LabeledOperator annihilation(const SpaceDescriptor& space);
LabeledOperator creation(const SpaceDescriptor& space);
LabeledOperator number(const SpaceDescriptor& space);
LabeledOperator pauli(const SpaceDescriptor& space, PauliKind which);
LabeledOperator photon_parity(const SpaceDescriptor& space);
LabeledOperator identity_op(const SpaceDescriptor& space);

}  // namespace tpqr

#endif
