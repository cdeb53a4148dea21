#include "tpqr/linalg.hpp"

#include <lapacke.h>

namespace tpqr::linalg {

namespace {
lapack_complex_double* lp(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }
}  // namespace

HermitianEigen eigh(const Matrix& a) {
    const int n = int(a.rows());
    Matrix work = a;  // zheev overwrites with eigenvectors
    RealVector w(n);
    int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'U', n, lp(work.data()), n, w.data());
    if (info != 0)
        throw std::runtime_error("eigh: zheev failed with info=" + std::to_string(info));
    return {std::move(w), std::move(work)};
}

HermitianEigen eigh_lowest(const Matrix& a, int k) {
    const int n = int(a.rows());
    if (k < 1 || k > n) throw std::invalid_argument("eigh_lowest: bad eigenpair count");
    Matrix work = a;
    RealVector w(n);
    Matrix z(n, k);
    std::vector<lapack_int> isuppz(size_t(2 * k));
    lapack_int m = 0;
    int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, lp(work.data()), n, 0.0, 0.0,
                              1, k, 0.0, &m, w.data(), lp(z.data()), n, isuppz.data());
    if (info != 0)
        throw std::runtime_error("eigh_lowest: zheevr failed with info=" + std::to_string(info));
    return {w.head(m), z.leftCols(m)};
}

GeneralEigen eig(const Matrix& a, bool want_vectors) {
    const int n = int(a.rows());
    Matrix work = a;  // destroyed
    Vector w(n);
    Matrix vr;
    if (want_vectors) vr.resize(n, n);
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
                             lp(work.data()), n, lp(w.data()), nullptr, 1,
                             want_vectors ? lp(vr.data()) : nullptr, want_vectors ? n : 1);
    if (info != 0)
        throw std::runtime_error("eig: zgeev failed with info=" + std::to_string(info));
    return {std::move(w), std::move(vr)};
}

Vector lu_solve(const Matrix& a, const Vector& b) {
    const int n = int(a.rows());
    Matrix lu = a;
    Vector x = b;
    std::vector<lapack_int> ipiv(n);
    int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, 1, lp(lu.data()), n, ipiv.data(),
                             lp(x.data()), n);
    if (info != 0)
        throw std::runtime_error("lu_solve: zgesv failed with info=" + std::to_string(info));
    return x;
}

Matrix inverse(const Matrix& a) {
    const int n = int(a.rows());
    Matrix inv = a;
    std::vector<lapack_int> ipiv(n);
    int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lp(inv.data()), n, ipiv.data());
    if (info != 0)
        throw std::runtime_error("inverse: zgetrf failed with info=" + std::to_string(info));
    info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, lp(inv.data()), n, ipiv.data());
    if (info != 0)
        throw std::runtime_error("inverse: zgetri failed with info=" + std::to_string(info));
    return inv;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix sandwich_superop(const Matrix& a, const Matrix& b) {
    return kron(b.transpose(), a);
}

Matrix commutator_superop(const Matrix& h) {
    const Matrix id = Matrix::Identity(h.rows(), h.cols());
    return Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix d = a - b;
    d = 0.5 * (d + d.adjoint()).eval();
    auto ew = eigh(d);
    return 0.5 * ew.values.cwiseAbs().sum();
}

}  // namespace tpqr::linalg
