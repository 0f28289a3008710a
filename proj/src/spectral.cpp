#include "pptgeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace pptgeo {

namespace {

double offdiag_mass(const ComplexMatrix& w) {
    double s = 0.0;
    for (std::size_t r = 0; r < w.rows(); ++r)
        for (std::size_t c = 0; c < w.cols(); ++c)
            if (r != c) s += std::norm(w(r, c));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing w(p,q). The 2x2 pivot [[a,b],[b*,d]]
// is first dephased by diag(f,1) with f = b/|b|, then rotated by the real
// Givens pair from the standard symmetric-Jacobi tangent choice.
void rotate(ComplexMatrix& w, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx b = w(p, q);
    const double ab = std::abs(b);
    if (ab == 0.0) return;
    const cplx f = b / ab;
    const double a = w(p, p).real();
    const double d = w(q, q).real();
    const double tau = (d - a) / (2.0 * ab);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx fc = f * c, fs = f * s;

    const std::size_t n = w.rows();
    // columns: (col_p, col_q) <- (fc*col_p - s*col_q, fs*col_p + c*col_q)
    for (std::size_t i = 0; i < n; ++i) {
        const cplx wp = w(i, p), wq = w(i, q);
        w(i, p) = fc * wp - s * wq;
        w(i, q) = fs * wp + c * wq;
        const cplx vp = v(i, p), vq = v(i, q);
        v(i, p) = fc * vp - s * vq;
        v(i, q) = fs * vp + c * vq;
    }
    // rows: (row_p, row_q) <- (conj(f)c*row_p - s*row_q, conj(f)s*row_p + c*row_q)
    const cplx fcc = std::conj(f) * c, fsc = std::conj(f) * s;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx wp = w(p, j), wq = w(q, j);
        w(p, j) = fcc * wp - s * wq;
        w(q, j) = fsc * wp + c * wq;
    }
    w(p, q) = 0.0;
    w(q, p) = 0.0;
    w(p, p) = cplx(w(p, p).real(), 0.0);
    w(q, q) = cplx(w(q, q).real(), 0.0);
}

// exactly Hermitian copy, gated on the input's hermiticity defect
ComplexMatrix symmetrized_checked(const ComplexMatrix& a, const char* who) {
    require(a.square(), std::string(who) + " needs a square matrix");
    if (max_hermiticity_defect(a) > 1e-10 * std::max(1.0, max_abs(a)))
        throw std::invalid_argument(std::string(who) + ": input is not Hermitian");
    const std::size_t n = a.rows();
    ComplexMatrix w = a;
    for (std::size_t r = 0; r < n; ++r) {
        w(r, r) = cplx(w(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx m = 0.5 * (w(r, c) + std::conj(w(c, r)));
            w(r, c) = m;
            w(c, r) = std::conj(m);
        }
    }
    return w;
}

}  // namespace

EigResult eig_hermitian(const ComplexMatrix& a, double tol_factor, std::size_t max_sweeps) {
    ComplexMatrix w = symmetrized_checked(a, "eig_hermitian");
    const std::size_t n = a.rows();
    EigResult res;
    if (n == 0) return res;
    res.values.resize(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'L',
                                           static_cast<lapack_int>(n), w.data().data(),
                                           static_cast<lapack_int>(n), res.values.data());
    if (info != 0) return eig_hermitian_jacobi(a, tol_factor, max_sweeps);
    res.vectors = std::move(w);  // eigenvectors as columns, values ascending
    return res;
}

EigResult eig_hermitian_jacobi(const ComplexMatrix& a, double tol_factor,
                               std::size_t max_sweeps) {
    ComplexMatrix w = symmetrized_checked(a, "eig_hermitian_jacobi");
    const std::size_t n = a.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = frobenius_norm(a);
    const double tol = tol_factor * scale;

    EigResult res;
    res.offdiag = offdiag_mass(w);
    std::size_t sweep = 0;
    while (res.offdiag > tol && sweep < max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(w(p, q)) > 0.0) rotate(w, v, p, q);
        ++sweep;
        res.offdiag = offdiag_mass(w);
    }
    if (res.offdiag > tol)
        throw NumericError("eig_hermitian_jacobi failed to converge: off-diagonal mass " +
                           std::to_string(res.offdiag) + " after " + std::to_string(sweep) +
                           " sweeps (target " + std::to_string(tol) + ")");
    res.sweeps = sweep;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });
    res.values.resize(n);
    res.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = w(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = v(i, order[k]);
    }
    return res;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a) {
    return eig_hermitian(a).values;
}

double min_eigenvalue_of(const ComplexMatrix& a) { return eig_hermitian(a).values.front(); }
double max_eigenvalue_of(const ComplexMatrix& a) { return eig_hermitian(a).values.back(); }

namespace {

ComplexMatrix doubled_form(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    ComplexMatrix h(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            h(r, n + c) = a(r, c);
            h(n + c, r) = std::conj(a(r, c));
        }
    return h;
}

// Gram-Schmidt completion of an n x n matrix whose first `have` columns are
// orthonormal; the rest are filled from the standard basis.
void complete_columns(ComplexMatrix& m, std::size_t have) {
    const std::size_t n = m.rows();
    std::size_t next = have;
    for (std::size_t e = 0; e < n && next < n; ++e) {
        std::vector<cplx> col(n, 0.0);
        col[e] = 1.0;
        for (std::size_t pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < next; ++k) {
                cplx ip = 0.0;
                for (std::size_t i = 0; i < n; ++i) ip += std::conj(m(i, k)) * col[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= ip * m(i, k);
            }
        double nr = 0.0;
        for (const auto& x : col) nr += std::norm(x);
        nr = std::sqrt(nr);
        if (nr < 1e-8) continue;  // basis vector already spanned
        for (std::size_t i = 0; i < n; ++i) m(i, next) = col[i] / nr;
        ++next;
    }
    if (next < n) throw NumericError("svd: unitary completion failed");
}

// fallback SVD through the Hermitian eigenproblem of the doubled form
SvdResult svd_doubled(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    SvdResult out;
    out.u = ComplexMatrix(n, n);
    out.v = ComplexMatrix(n, n);
    out.singular_values.assign(n, 0.0);

    const EigResult eg = eig_hermitian(doubled_form(a));
    // positive eigenvalues descending; eigenvector (u;v)/sqrt(2) carries the pair
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < 2 * n; ++k)
        if (eg.values[k] > 0.0) pos.push_back(k);
    std::sort(pos.begin(), pos.end(),
              [&](std::size_t i, std::size_t j) { return eg.values[i] > eg.values[j]; });

    const double smax = pos.empty() ? 0.0 : eg.values[pos.front()];
    const double cut = 1e-12 * smax;
    const double root2 = std::sqrt(2.0);
    std::size_t rank = 0;
    for (std::size_t idx : pos) {
        if (rank >= n || eg.values[idx] <= cut) break;
        out.singular_values[rank] = eg.values[idx];
        for (std::size_t i = 0; i < n; ++i) {
            out.u(i, rank) = root2 * eg.vectors(i, idx);
            out.v(i, rank) = root2 * eg.vectors(n + i, idx);
        }
        ++rank;
    }
    complete_columns(out.u, rank);
    complete_columns(out.v, rank);
    return out;
}

}  // namespace

std::vector<double> singular_values(const ComplexMatrix& a) {
    require(a.square(), "singular_values: square input expected");
    if (a.rows() == 0) return {};
    if (max_hermiticity_defect(a) <= 1e-12 * std::max(1.0, max_abs(a))) {
        // Hermitian fast path: singular values are |eigenvalues|.
        std::vector<double> s = eigenvalues_hermitian(a);
        for (auto& x : s) x = std::abs(x);
        std::sort(s.rbegin(), s.rend());
        return s;
    }
    const std::size_t n = a.rows();
    std::vector<double> lam = eigenvalues_hermitian(doubled_form(a));
    for (auto& x : lam) x = std::abs(x);
    std::sort(lam.rbegin(), lam.rend());
    // spectrum is {+-sigma_i}: magnitudes come in pairs, keep one of each
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = 0.5 * (lam[2 * i] + lam[2 * i + 1]);
    return s;
}

SvdResult svd(const ComplexMatrix& a) {
    require(a.square(), "svd: square input expected");
    const std::size_t n = a.rows();
    SvdResult out;
    out.u = ComplexMatrix(n, n);
    out.v = ComplexMatrix(n, n);
    out.singular_values.assign(n, 0.0);
    if (n == 0) return out;

    ComplexMatrix work = a;
    ComplexMatrix vt(n, n);
    const lapack_int info = LAPACKE_zgesdd(
        LAPACK_ROW_MAJOR, 'A', static_cast<lapack_int>(n), static_cast<lapack_int>(n),
        work.data().data(), static_cast<lapack_int>(n), out.singular_values.data(),
        out.u.data().data(), static_cast<lapack_int>(n), vt.data().data(),
        static_cast<lapack_int>(n));
    if (info != 0) return svd_doubled(a);
    out.v = adjoint(vt);
    return out;
}

ComplexMatrix operator_sqrt(const ComplexMatrix& a, double rel_clip) {
    const EigResult eg = eig_hermitian(a);
    const std::size_t n = a.rows();
    const double lmax = std::max(eg.values.back(), 0.0);
    const double cut = rel_clip * lmax;
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = eg.values[k] > cut ? std::sqrt(eg.values[k]) : 0.0;
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (r[k] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eg.vectors(i, k) * r[k];
            if (vik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eg.vectors(j, k));
        }
    }
    return out;
}

}  // namespace pptgeo
