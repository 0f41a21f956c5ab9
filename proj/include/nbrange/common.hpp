#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbrange {

using cdouble = std::complex<double>;
using CVec = std::vector<cdouble>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Dense row-major complex matrix. Sized for subspace/ADMM blocks (tens to
/// low hundreds per side), not for general large-scale linear algebra.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("CMat: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cdouble& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const cdouble& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<cdouble>& data() const { return data_; }
    std::vector<cdouble>& data() { return data_; }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cdouble> data_;
};

inline double frobenius_norm(const CMat& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs(const CMat& a) {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

/// max_ij |A(i,j) - conj(A(j,i))|
inline double hermitian_defect(const CMat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j <= i; ++j)
            d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

/// A^H A, Hermitian by construction (lower triangle computed, mirrored).
inline CMat gram(const CMat& a) {
    const int n = a.cols();
    CMat g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cdouble s = 0.0;
            for (int r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * a(r, j);
            if (i == j) s = cdouble(s.real(), 0.0);
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    }
    return g;
}

} // namespace nbrange
