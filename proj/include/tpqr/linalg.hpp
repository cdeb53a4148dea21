#ifndef TPQR_LINALG_HPP
#define TPQR_LINALG_HPP

#include <vector>

#include "tpqr/common.hpp"

namespace tpqr::linalg {

// Hermitian eigendecomposition, eigenvalues ascending, columns are eigenvectors.
struct HermitianEigen {
    RealVector values;
    Matrix vectors;
};
HermitianEigen eigh(const Matrix& a);

// Only the k lowest eigenpairs (LAPACK zheevr).
HermitianEigen eigh_lowest(const Matrix& a, int k);

// General (non-Hermitian) eigendecomposition via LAPACK zgeev. Right
// eigenvectors as columns of `right`; left vectors are reconstructed by the
// caller when needed (see floquet module).
struct GeneralEigen {
    Vector values;
    Matrix right;
};
GeneralEigen eig(const Matrix& a, bool want_vectors = true);

// In-place LU solve A x = b (general complex). Returns the solution.
Vector lu_solve(const Matrix& a, const Vector& b);

// Dense inverse via LU.
Matrix inverse(const Matrix& a);

// Kronecker product, standard layout: (A (x) B)[i*rB+k, j*cB+l] = A(i,j) B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// Column-stacking vec and its inverse.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, int rows, int cols);

// Superoperator of rho -> A rho B on column-stacked density matrices.
Matrix sandwich_superop(const Matrix& a, const Matrix& b);

// Superoperator of rho -> -i [H, rho].
Matrix commutator_superop(const Matrix& h);

// Trace distance (1/2)||A - B||_1 for Hermitian-dominant matrices.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace tpqr::linalg

#endif
