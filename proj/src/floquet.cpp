#include "tpqr/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tpqr/linalg.hpp"

namespace tpqr {

FloquetLiouvillian build_floquet_liouvillian(const LiouvillianParts& parts, int k_max) {
    if (k_max < 1) throw std::invalid_argument("build_floquet_liouvillian: k_max must be >= 1");
    const int nb = int(parts.L0.rows());
    FloquetLiouvillian fl;
    fl.space = {nb, k_max, parts.omega_d};
    const int n = fl.space.total_dim();
    fl.matrix = Matrix::Zero(n, n);
    for (int m = -k_max; m <= k_max; ++m) {
        const int r = fl.space.block_of(m);
        fl.matrix.block(r, r, nb, nb) = parts.L0;
        fl.matrix.block(r, r, nb, nb).diagonal().array() += Complex(0, m * parts.omega_d);
        if (m - 1 >= -k_max) fl.matrix.block(r, fl.space.block_of(m - 1), nb, nb) = parts.Lplus;
        if (m + 1 <= k_max) fl.matrix.block(r, fl.space.block_of(m + 1), nb, nb) = parts.Lminus;
    }
    return fl;
}

Complex FloquetDecomposition::canonical_omega(int i) const {
    Complex om = omegas[i];
    const double wd = space.omega_d;
    double re = std::remainder(om.real(), wd);
    if (re <= -0.5 * wd) re += wd;
    return {re, om.imag()};
}

FloquetDecomposition biorthogonal_eigensystem(const FloquetLiouvillian& fl) {
    if (!fl.matrix.allFinite())
        throw std::invalid_argument("biorthogonal_eigensystem: matrix has non-finite entries");
    auto ge = linalg::eig(fl.matrix, true);
    const int n = int(ge.values.size());

    FloquetDecomposition dec;
    dec.space = fl.space;
    dec.right = std::move(ge.right);
    // Lambda (rate form) -> Omega = i Lambda (frequency form)
    dec.omegas = Complex(0, 1) * ge.values;

    // left vectors from the inverse of the right-vector matrix; rows of
    // inv(R) are the biorthonormal duals, stored conjugated as columns
    Matrix inv;
    try {
        inv = linalg::inverse(dec.right);
    } catch (const std::runtime_error&) {
        throw DiagnosticsError("biorthogonal_eigensystem: right-eigenvector matrix is singular "
                               "(defective pencil)");
    }
    dec.left = inv.adjoint();

    // completeness probes: || R (L^H x) - x || / ||x||
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    double resid = 0.0;
    for (int probe = 0; probe < 4; ++probe) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = Complex(gauss(rng), gauss(rng));
        const Vector y = dec.right * (dec.left.adjoint() * x);
        resid = std::max(resid, (y - x).cwiseAbs().maxCoeff() / x.cwiseAbs().maxCoeff());
    }
    dec.pairing_residual = resid;
    if (resid > 1e-6) {
        // report the tightest eigenvalue clusters, they are the usual culprits
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[size_t(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return dec.omegas[a].real() < dec.omegas[b].real();
        });
        double best = 1e300;
        Complex c1 = 0, c2 = 0;
        for (int i = 0; i + 1 < n; ++i) {
            const Complex d = dec.omegas[order[size_t(i) + 1]] - dec.omegas[order[size_t(i)]];
            if (std::abs(d) < best) {
                best = std::abs(d);
                c1 = dec.omegas[order[size_t(i)]];
                c2 = dec.omegas[order[size_t(i) + 1]];
            }
        }
        throw DiagnosticsError(
            "biorthogonal_eigensystem: pairing residual " + std::to_string(resid) +
            " exceeds 1e-6; nearest eigenvalue cluster around (" + std::to_string(c1.real()) +
            ", " + std::to_string(c1.imag()) + "i) and (" + std::to_string(c2.real()) + ", " +
            std::to_string(c2.imag()) + "i)");
    }

    dec.max_im_omega = dec.omegas.imag().maxCoeff();
    if (dec.max_im_omega > 1e-9)
        throw DiagnosticsError("biorthogonal_eigensystem: eigenvalue with Im Omega = " +
                               std::to_string(dec.max_im_omega) +
                               " > 1e-9, generator is not dissipative");

    int best_i = 0;
    double best_abs = 1e300;
    for (int i = 0; i < n; ++i)
        if (std::abs(dec.omegas[i]) < best_abs) {
            best_abs = std::abs(dec.omegas[i]);
            best_i = i;
        }
    dec.steady_index = best_i;
    return dec;
}

const Matrix& PeriodicSteadyState::component(int m) const {
    if (m < -k_max || m > k_max)
        throw std::out_of_range("PeriodicSteadyState: harmonic index out of range");
    return components[size_t(m + k_max)];
}

Matrix PeriodicSteadyState::at_time(double t) const {
    Matrix rho = Matrix::Zero(dim, dim);
    for (int m = -k_max; m <= k_max; ++m)
        rho += component(m) * std::exp(Complex(0, -m * omega_d * t));
    return rho;
}

namespace {

PeriodicSteadyState finalize_steady(std::vector<Matrix> comps, int dim, int k_max,
                                    double omega_d) {
    PeriodicSteadyState st;
    st.dim = dim;
    st.k_max = k_max;
    st.omega_d = omega_d;

    // a physical periodic state obeys rho^(-m) = rho^(m)^dag; symmetrize and
    // record the deviation
    double herm = 0.0;
    std::vector<Matrix> sym(comps.size());
    for (int m = -k_max; m <= k_max; ++m) {
        const Matrix& a = comps[size_t(m + k_max)];
        const Matrix& b = comps[size_t(-m + k_max)];
        herm = std::max(herm, (a - b.adjoint()).cwiseAbs().maxCoeff());
        sym[size_t(m + k_max)] = 0.5 * (a + b.adjoint());
    }
    st.components = std::move(sym);

    const Complex tr0 = st.components[size_t(k_max)].trace();
    if (std::abs(tr0) < 1e-14)
        throw DiagnosticsError("steady_state: zeroth harmonic is traceless, cannot normalize");
    for (auto& c : st.components) c /= tr0;
    st.hermiticity_error = herm / std::abs(tr0);

    for (int i = 0; i < 16; ++i) {
        const double t = 2 * M_PI / omega_d * i / 16.0;
        Matrix rho = st.at_time(t);
        st.trace_error = std::max(st.trace_error, std::abs(rho.trace() - Complex(1, 0)));
        auto ev = linalg::eigh(0.5 * (rho + rho.adjoint()));
        st.min_eigenvalue = std::min(st.min_eigenvalue, ev.values.minCoeff());
    }
    if (st.trace_error > 1e-8)
        throw DiagnosticsError("steady_state: trace not preserved over the period, error = " +
                               std::to_string(st.trace_error));
    if (st.min_eigenvalue < -1e-6)
        throw DiagnosticsError("steady_state: significantly negative eigenvalue " +
                               std::to_string(st.min_eigenvalue));
    return st;
}

}  // namespace

PeriodicSteadyState steady_state(const FloquetDecomposition& dec) {
    const int nb = dec.space.base_dim;
    const int k_max = dec.space.k_max;
    const int d = int(std::lround(std::sqrt(double(nb))));
    if (d * d != nb) throw std::invalid_argument("steady_state: base_dim is not a square");

    // uniqueness: exactly one eigenvalue near zero (not a replica)
    const double tol = 1e-8 * std::max(1.0, dec.space.omega_d);
    int count = 0;
    for (int i = 0; i < dec.omegas.size(); ++i)
        if (std::abs(dec.omegas[i]) < tol) ++count;
    if (count == 0)
        throw DiagnosticsError("steady_state: no eigenvalue within " + std::to_string(tol) +
                               " of zero");
    if (count > 1)
        throw DiagnosticsError("steady_state: " + std::to_string(count) +
                               " eigenvalues near zero, degenerate steady manifold");

    const Vector phi = dec.right.col(dec.steady_index);
    std::vector<Matrix> comps;
    comps.reserve(size_t(2 * k_max + 1));
    for (int m = -k_max; m <= k_max; ++m)
        comps.push_back(linalg::unvec(phi.segment(dec.space.block_of(m), nb), d, d));
    return finalize_steady(std::move(comps), d, k_max, dec.space.omega_d);
}

namespace {

// Block-tridiagonal inverse iteration for the null vector of the Floquet
// matrix. Never assembles the full matrix.
Vector block_tridiagonal_null_vector(const LiouvillianParts& parts, int k_max) {
    const int nb = int(parts.L0.rows());
    const int nblk = 2 * k_max + 1;
    const double scale = parts.L0.cwiseAbs().maxCoeff();
    const Complex shift(1e-12 * scale, 0);

    // forward elimination: Dt_m = D_m - A Dt_{m-1}^{-1} B, cache Dt_m^{-1}
    std::vector<Matrix> dinv;
    dinv.reserve(size_t(nblk));
    Matrix prev_inv;
    for (int b = 0; b < nblk; ++b) {
        const int m = b - k_max;
        Matrix d = parts.L0;
        d.diagonal().array() += Complex(0, m * parts.omega_d) - shift;
        if (b > 0) d -= parts.Lplus * (prev_inv * parts.Lminus);
        prev_inv = linalg::inverse(d);
        dinv.push_back(prev_inv);
    }

    auto solve = [&](const Vector& rhs) {
        std::vector<Vector> btilde;
        btilde.resize(size_t(nblk));
        for (int b = 0; b < nblk; ++b) {
            Vector r = rhs.segment(b * nb, nb);
            if (b > 0) r -= parts.Lplus * (dinv[size_t(b - 1)] * btilde[size_t(b - 1)]);
            btilde[size_t(b)] = std::move(r);
        }
        Vector x(nblk * nb);
        Vector xa = dinv[size_t(nblk - 1)] * btilde[size_t(nblk - 1)];
        x.segment((nblk - 1) * nb, nb) = xa;
        for (int b = nblk - 2; b >= 0; --b) {
            xa = dinv[size_t(b)] * (btilde[size_t(b)] - parts.Lminus * xa);
            x.segment(b * nb, nb) = xa;
        }
        return x;
    };

    const int d = int(std::lround(std::sqrt(double(nb))));
    Vector x = Vector::Zero(nblk * nb);
    // start from the maximally mixed state in the zeroth harmonic
    for (int i = 0; i < d; ++i) x[k_max * nb + i * d + i] = 1.0 / d;
    for (int it = 0; it < 4; ++it) {
        x = solve(x);
        x /= x.norm();
    }
    return x;
}

}  // namespace

PeriodicSteadyState steady_state_direct(const LiouvillianParts& parts, int k_max) {
    if (k_max < 1) throw std::invalid_argument("steady_state_direct: k_max must be >= 1");
    const int nb = int(parts.L0.rows());
    const int d = int(std::lround(std::sqrt(double(nb))));
    Vector x = block_tridiagonal_null_vector(parts, k_max);
    std::vector<Matrix> comps;
    comps.reserve(size_t(2 * k_max + 1));
    for (int m = -k_max; m <= k_max; ++m)
        comps.push_back(linalg::unvec(x.segment((m + k_max) * nb, nb), d, d));
    return finalize_steady(std::move(comps), d, k_max, parts.omega_d);
}

namespace {

// Residues c_i = Tr[X+ R_i^(0)] * <<L_i | rho_inf X- >> for every eigenpair.
Vector spectral_residues(const FloquetDecomposition& dec, const PeriodicSteadyState& steady,
                         const OutputFieldOperator& out) {
    const int nb = dec.space.base_dim;
    const int k_max = dec.space.k_max;
    const int d = steady.dim;
    const int n = dec.space.total_dim();

    Vector w = linalg::vec(out.x_plus.transpose().eval());
    Vector f1 = dec.right.middleRows(dec.space.block_of(0), nb).transpose() * w;

    Vector seed(n);
    for (int m = -k_max; m <= k_max; ++m) {
        const Matrix s = steady.component(m) * out.x_minus;
        seed.segment(dec.space.block_of(m), nb) = Eigen::Map<const Vector>(s.data(), nb);
    }
    (void)d;
    Vector f2 = dec.left.adjoint() * seed;
    return f1.cwiseProduct(f2);
}

}  // namespace

Vector correlation_gplus(const FloquetDecomposition& dec, const PeriodicSteadyState& steady,
                         const OutputFieldOperator& out, const RealVector& tau_grid) {
    const Vector c = spectral_residues(dec, steady, out);
    Vector g(tau_grid.size());
    for (int j = 0; j < tau_grid.size(); ++j) {
        const double tau = tau_grid[j];
        if (tau < 0) throw std::invalid_argument("correlation_gplus: tau must be >= 0");
        Complex acc = 0;
        for (int i = 0; i < c.size(); ++i)
            acc += c[i] * std::exp(Complex(0, -1) * dec.omegas[i] * tau);
        g[j] = acc;
    }
    return g;
}

SpectrumResult fluorescence_spectrum(const FloquetDecomposition& dec,
                                     const PeriodicSteadyState& steady,
                                     const OutputFieldOperator& out,
                                     const RealVector& omega_grid, const SpectrumMetadata& meta,
                                     double delta_broadening, double extra_broadening) {
    if (!omega_grid.allFinite())
        throw std::invalid_argument("fluorescence_spectrum: omega grid must be finite");
    const Vector c = spectral_residues(dec, steady, out);
    const int n = int(c.size());

    Vector poles(n);
    for (int i = 0; i < n; ++i) {
        Complex om = dec.omegas[i];
        double im = om.imag();
        if (std::abs(im) < 1e-10) im = -delta_broadening;
        poles[i] = Complex(om.real(), im - extra_broadening);
    }

    SpectrumResult res;
    res.omega = omega_grid;
    res.meta = meta;
    res.values.resize(omega_grid.size());
    for (int j = 0; j < omega_grid.size(); ++j) {
        const double w = omega_grid[j];
        double acc = 0;
        for (int i = 0; i < n; ++i) {
            const Complex den = Complex(0, 1) * (w - poles[i]);
            acc += -2.0 * std::real(c[i] / den);
        }
        res.values[j] = acc;
    }
    return res;
}

EqualTimeCorrelators photon_statistics(const Matrix& rho, const Matrix& x_plus) {
    const Matrix xm = x_plus.adjoint();
    const Matrix x1 = xm * x_plus;
    const double d1 = std::real((rho * x1).trace());
    if (std::abs(d1) < 1e-14)
        throw DiagnosticsError("photon_statistics: dark output, <X- X+> below 1e-14");
    const double n2 = std::real((rho * xm * x1 * x_plus).trace());
    const double n3 = std::real((rho * xm * xm * x1 * x_plus * x_plus).trace());
    return {n2 / (d1 * d1), n3 / (d1 * d1 * d1)};
}

EqualTimeCorrelators equal_time_correlators(const PeriodicSteadyState& steady,
                                            const OutputFieldOperator& out, int t_samples) {
    if (t_samples < 1) throw std::invalid_argument("equal_time_correlators: t_samples >= 1");
    const Matrix& xp = out.x_plus;
    const Matrix xm = out.x_minus;
    const Matrix x1 = xm * xp;
    const Matrix x2 = xm * x1 * xp;
    const Matrix x3 = xm * xm * x1 * xp * xp;
    double d1 = 0, n2 = 0, n3 = 0;
    const double period = 2 * M_PI / steady.omega_d;
    for (int i = 0; i < t_samples; ++i) {
        const Matrix rho = steady.at_time(period * i / t_samples);
        d1 += std::real((rho * x1).trace()) / t_samples;
        n2 += std::real((rho * x2).trace()) / t_samples;
        n3 += std::real((rho * x3).trace()) / t_samples;
    }
    if (std::abs(d1) < 1e-14)
        throw DiagnosticsError("equal_time_correlators: dark output, period-averaged <X- X+> "
                               "below 1e-14");
    return {n2 / (d1 * d1), n3 / (d1 * d1 * d1)};
}

// ---- time-domain oracle ----

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
constexpr double a21 = 1. / 5;
constexpr double a31 = 3. / 40, a32 = 9. / 40;
constexpr double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
constexpr double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                 a54 = -212. / 729;
constexpr double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247, a64 = 49. / 176,
                 a65 = -5103. / 18656;
constexpr double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192, b5 = -2187. / 6784,
                 b6 = 11. / 84;
constexpr double e1 = 35. / 384 - 5179. / 57600, e3 = 500. / 1113 - 7571. / 16695,
                 e4 = 125. / 192 - 393. / 640, e5 = -2187. / 6784 + 92097. / 339200,
                 e6 = 11. / 84 - 187. / 2100, e7 = -1. / 40;

}  // namespace

std::vector<Matrix> time_domain_propagate(const LiouvillianParts& parts, const Matrix& rho0,
                                          double t0, const RealVector& sample_times,
                                          const PropagationOptions& opts) {
    const int d = int(rho0.rows());
    const int nb = d * d;
    if (nb != parts.L0.rows())
        throw std::invalid_argument("time_domain_propagate: state does not match generator");
    auto apply = [&](double t, const Vector& v) -> Vector {
        const Complex ph = std::exp(Complex(0, -parts.omega_d * t));
        Vector out = parts.L0 * v;
        if (parts.Lplus.size() > 0) out += ph * (parts.Lplus * v);
        if (parts.Lminus.size() > 0) out += std::conj(ph) * (parts.Lminus * v);
        return out;
    };

    std::vector<Matrix> samples;
    Vector y = linalg::vec(rho0);
    double t = t0;
    double dt = opts.dt_init;
    Vector k1 = apply(t, y);
    int isample = 0;
    const int nsamp = int(sample_times.size());
    long steps = 0;

    while (isample < nsamp) {
        if (t >= sample_times[isample] - 1e-14) {
            samples.push_back(linalg::unvec(y, d, d));
            ++isample;
            continue;
        }
        double h = std::min(dt, sample_times[isample] - t);
        if (++steps > opts.max_steps)
            throw ConvergenceError("time_domain_propagate: step budget exhausted");

        const Vector k2 = apply(t + c2 * h, y + h * (a21 * k1));
        const Vector k3 = apply(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vector k4 = apply(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = apply(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 =
            apply(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = apply(t + h, ynew);
        const Vector err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double sc = opts.atol + opts.rtol * std::max(y.cwiseAbs().maxCoeff(),
                                                           ynew.cwiseAbs().maxCoeff());
        const double enorm = err.cwiseAbs().maxCoeff() / sc;
        if (enorm <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
        dt = h * fac;
        if (dt < opts.dt_min)
            throw ConvergenceError("time_domain_propagate: step size underflow (stiff system)");
    }
    return samples;
}

PeriodPartition build_period_partition(const LiouvillianParts& parts, int nr, int nsub,
                                       double t0) {
    if (nr < 1 || nsub < nr)
        throw std::invalid_argument("build_period_partition: need nsub >= nr >= 1");
    const int nb = int(parts.L0.rows());
    const double period = 2 * M_PI / parts.omega_d;
    const int per_interval = (nsub + nr - 1) / nr;
    const double dt = period / double(nr * per_interval);

    auto lt = [&](double t) { return parts.at_time(t); };

    PeriodPartition part;
    part.omega_d = parts.omega_d;
    part.dim = nb;
    part.nr = nr;
    part.maps.reserve(size_t(nr));
    double t = t0;
    for (int j = 0; j < nr; ++j) {
        Matrix u = Matrix::Identity(nb, nb);
        for (int s = 0; s < per_interval; ++s) {
            const Matrix m1 = lt(t);
            const Matrix mh = lt(t + 0.5 * dt);
            const Matrix m2 = lt(t + dt);
            const Matrix q1 = m1 * u;
            const Matrix q2 = mh * (u + 0.5 * dt * q1);
            const Matrix q3 = mh * (u + 0.5 * dt * q2);
            const Matrix q4 = m2 * (u + dt * q3);
            u += dt / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
            t += dt;
        }
        part.maps.push_back(std::move(u));
    }
    return part;
}

Matrix stroboscopic_fixed_point(const PeriodPartition& part, const Matrix& rho0,
                                int max_periods, double tol) {
    const int d = int(rho0.rows());
    Matrix full_period = part.maps.front();
    for (size_t j = 1; j < part.maps.size(); ++j)
        full_period = (part.maps[j] * full_period).eval();
    Vector v = linalg::vec(rho0);
    for (int q = 0; q < max_periods; ++q) {
        Vector w = full_period * v;
        const double delta = (w - v).cwiseAbs().maxCoeff();
        v = w;
        const Complex tr = linalg::unvec(v, d, d).trace();
        v /= tr;
        if (delta < tol) {
            Matrix rho = linalg::unvec(v, d, d);
            return 0.5 * (rho + rho.adjoint());
        }
    }
    throw ConvergenceError("stroboscopic_fixed_point: no convergence within the period budget");
}

Vector time_domain_gplus(const PeriodPartition& part, const Matrix& rho_fixed,
                         const OutputFieldOperator& out, int n_tau, int nt0) {
    const int nr = part.nr;
    if (nt0 < 1 || nr % nt0 != 0)
        throw std::invalid_argument("time_domain_gplus: nt0 must divide nr");
    const int d = int(rho_fixed.rows());

    // steady state at every intra-period phase by marching the fixed point
    std::vector<Matrix> rho_phase(static_cast<size_t>(nr));
    rho_phase[0] = rho_fixed;
    for (int j = 1; j < nr; ++j) {
        Vector v = part.maps[size_t(j - 1)] * linalg::vec(rho_phase[size_t(j - 1)]);
        rho_phase[size_t(j)] = linalg::unvec(v, d, d);
    }

    const int stride = nr / nt0;
    std::vector<Vector> seeds;
    std::vector<int> phase_of;
    for (int i = 0; i < nt0; ++i) {
        seeds.push_back(linalg::vec((rho_phase[size_t(i * stride)] * out.x_minus).eval()));
        phase_of.push_back(i * stride);
    }

    const Vector wtrace = linalg::vec(out.x_plus.transpose().eval());
    Vector g = Vector::Zero(n_tau);
    for (int i = 0; i < nt0; ++i) {
        Vector s = seeds[size_t(i)];
        int phase = phase_of[size_t(i)];
        for (int j = 0; j < n_tau; ++j) {
            g[j] += (wtrace.transpose() * s)(0);  // Tr[X+ sigma]
            s = part.maps[size_t(phase)] * s;
            phase = (phase + 1) % nr;
        }
    }
    return g / double(nt0);
}

RealVector spectrum_from_gplus(const Vector& gplus, double dtau, const RealVector& omega_grid,
                               double eta) {
    const int n = int(gplus.size());
    RealVector s(omega_grid.size());
    for (int j = 0; j < omega_grid.size(); ++j) {
        const double w = omega_grid[j];
        Complex acc = 0;
        for (int i = 0; i < n; ++i) {
            const double tau = i * dtau;
            const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += weight * gplus[i] * std::exp(Complex(0, w * tau) - eta * tau);
        }
        s[j] = 2.0 * std::real(acc) * dtau;
    }
    return s;
}

}  // namespace tpqr
