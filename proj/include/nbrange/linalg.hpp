#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nbrange/common.hpp"

namespace nbrange {

/// Eigendecomposition of a Hermitian matrix: A = V diag(eigenvalues) V^H.
/// Eigenvalues sorted descending; ties keep their pre-sort order.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    CMat eigenvectors; // column i pairs with eigenvalues[i]
};

/// Hankel matrix of shape (K-L+1) x L with entry (r, c) = h[r + c].
inline CMat hankel(const CVec& h, int L) {
    const int K = static_cast<int>(h.size());
    if (L < 1 || L > K) throw std::invalid_argument("hankel: need 1 <= L <= len(h)");
    CMat m(K - L + 1, L);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < L; ++c) m(r, c) = h[r + c];
    return m;
}

namespace detail {

inline double off_diagonal_norm(const CMat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices. Sweeps 2x2 unitary
/// rotations over all pivot pairs until the off-diagonal Frobenius mass drops
/// below 1e-12 * ||A||_F; at most 100 sweeps, else non-convergence is reported.
inline EigenDecomposition eig_hermitian(const CMat& a_in) {
    const int n = a_in.rows();
    if (a_in.cols() != n) throw std::invalid_argument("eig_hermitian: matrix not square");
    if (hermitian_defect(a_in) > 1e-12 * std::max(1.0, max_abs(a_in)))
        throw std::invalid_argument("eig_hermitian: input not Hermitian");

    CMat a = a_in;
    CMat v = CMat::identity(n);
    const double fro = frobenius_norm(a);
    const double off_tol = 1e-12 * fro;
    const int max_sweeps = 100;

    bool converged = (n <= 1) || fro == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (detail::off_diagonal_norm(a) <= off_tol) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cdouble beta = a(p, q);
                const double ab = std::abs(beta);
                if (ab == 0.0) continue;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                // Phase factor turns the 2x2 pivot block real symmetric, then
                // a classic Jacobi rotation annihilates it.
                const cdouble f = beta / ab; // e^{i phi}
                const double zeta = (gamma - alpha) / (2.0 * ab);
                const double t = (zeta >= 0.0) ? 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                                               : 1.0 / (zeta - std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cdouble fc = std::conj(f);

                // A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                for (int i = 0; i < n; ++i) {
                    const cdouble ap = a(i, p);
                    const cdouble aq = a(i, q);
                    a(i, p) = c * ap - s * fc * aq;
                    a(i, q) = s * ap + c * fc * aq;
                }
                // A <- U^H A
                for (int j = 0; j < n; ++j) {
                    const cdouble ap = a(p, j);
                    const cdouble aq = a(q, j);
                    a(p, j) = c * ap - s * f * aq;
                    a(q, j) = s * ap + c * f * aq;
                }
                // V <- V U
                for (int i = 0; i < n; ++i) {
                    const cdouble vp = v(i, p);
                    const cdouble vq = v(i, q);
                    v(i, p) = c * vp - s * fc * vq;
                    v(i, q) = s * vp + c * fc * vq;
                }
                // Analytic pivot entries; re-hermitize the touched rows.
                a(p, p) = alpha - t * ab;
                a(q, q) = gamma + t * ab;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
            }
        }
    }
    if (!converged && detail::off_diagonal_norm(a) > off_tol)
        throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors = CMat(n, n);
    for (int k = 0; k < n; ++k) {
        dec.eigenvalues[k] = diag[order[k]];
        for (int i = 0; i < n; ++i) dec.eigenvectors(i, k) = v(i, order[k]);
    }
    return dec;
}

/// Frobenius-nearest PSD matrix: eigenvalues clipped at zero, recomposed.
inline CMat project_psd(const CMat& a) {
    const EigenDecomposition dec = eig_hermitian(a);
    const int n = a.rows();
    CMat out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cdouble s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double lam = dec.eigenvalues[k];
                if (lam <= 0.0) continue;
                s += dec.eigenvectors(i, k) * lam * std::conj(dec.eigenvectors(j, k));
            }
            if (i == j) s = cdouble(s.real(), 0.0);
            out(i, j) = s;
            out(j, i) = std::conj(s);
        }
    }
    return out;
}

} // namespace nbrange
