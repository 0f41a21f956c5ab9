#pragma once

// Test-only reference computations, kept independent of the library's
// eigensolver path: eigenpairs come from plain power iteration with
// deflation, projections from the oracle eigenpairs.

#include <cmath>
#include <vector>

#include "nbrange/common.hpp"
#include "nbrange/rng.hpp"

namespace oracle {

using nbrange::CMat;
using nbrange::CVec;
using nbrange::cdouble;

inline CVec mat_vec(const CMat& a, const CVec& x) {
    CVec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        cdouble s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double vec_norm(const CVec& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

struct EigPair {
    double value;
    CVec vector;
};

// Power iteration with Rayleigh-quotient readout. Works on shifted matrices
// so the dominant-magnitude eigenvalue is always the dominant-value one.
inline EigPair dominant_eigenpair(const CMat& a, nbrange::Rng& rng, int iters = 20000) {
    const int n = a.rows();
    CVec x(n);
    for (auto& v : x) v = cdouble(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    double nm = vec_norm(x);
    for (auto& v : x) v /= nm;
    for (int it = 0; it < iters; ++it) {
        CVec y = mat_vec(a, x);
        nm = vec_norm(y);
        if (nm == 0.0) break; // x already in the kernel
        for (auto& v : y) v /= nm;
        x = std::move(y);
    }
    CVec ax = mat_vec(a, x);
    cdouble rq = 0.0;
    for (int i = 0; i < n; ++i) rq += std::conj(x[i]) * ax[i];
    return {rq.real(), x};
}

// All eigenvalues (descending) of a Hermitian PSD matrix via power iteration
// plus deflation A <- A - lambda v v^H.
inline std::vector<double> psd_eigenvalues(CMat a, uint64_t seed, int iters = 20000) {
    nbrange::Rng rng(seed);
    const int n = a.rows();
    std::vector<double> vals;
    for (int k = 0; k < n; ++k) {
        EigPair p = dominant_eigenpair(a, rng, iters);
        vals.push_back(p.value);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) -= p.value * p.vector[i] * std::conj(p.vector[j]);
    }
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

// PSD projection built from oracle eigenpairs of a general Hermitian matrix.
// Shift makes the matrix PSD first so power iteration tracks the right end.
inline CMat psd_projection(const CMat& a, uint64_t seed, int iters = 20000) {
    const int n = a.rows();
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
        bound = std::max(bound, row);
    }
    CMat shifted = a;
    for (int i = 0; i < n; ++i) shifted(i, i) += bound; // Gershgorin shift, now PSD

    nbrange::Rng rng(seed);
    CMat rest = shifted;
    CMat proj(n, n);
    for (int k = 0; k < n; ++k) {
        EigPair p = dominant_eigenpair(rest, rng, iters);
        const double lam = p.value - bound; // eigenvalue of the original matrix
        if (lam > 0.0)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) proj(i, j) += lam * p.vector[i] * std::conj(p.vector[j]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rest(i, j) -= p.value * p.vector[i] * std::conj(p.vector[j]);
    }
    return proj;
}

inline CMat random_hermitian(int n, nbrange::Rng& rng) {
    CMat a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = cdouble(rng.uniform(-1.0, 1.0), 0.0);
        for (int j = 0; j < i; ++j) {
            const cdouble v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    return a;
}

inline CMat random_matrix(int rows, int cols, nbrange::Rng& rng) {
    CMat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = cdouble(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return a;
}

} // namespace oracle
