#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "nbrange/common.hpp"

namespace nbrange {

/// Linear-interpolation quantile (index p*(n-1)) of a pre-sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

/// Error statistics over one estimator's runs. Errors are signed
/// (estimate - truth); RMSE uses their magnitudes, median and the Q90 width
/// (quantile 0.95 minus quantile 0.05, the interval around the median holding
/// 90% of the runs) use the signed empirical distribution. Failed runs are
/// counted, never folded into the statistics.
struct ErrorStats {
    size_t successes = 0;
    size_t failures = 0;
    double rmse_m = 0.0;
    double median_m = 0.0;
    double q90_m = 0.0;
};

inline ErrorStats error_stats(std::vector<double> signed_errors, size_t failures) {
    ErrorStats st;
    st.failures = failures;
    st.successes = signed_errors.size();
    if (signed_errors.empty()) return st;
    double sq = 0.0;
    for (double e : signed_errors) sq += e * e;
    st.rmse_m = std::sqrt(sq / static_cast<double>(signed_errors.size()));
    std::sort(signed_errors.begin(), signed_errors.end());
    st.median_m = quantile_sorted(signed_errors, 0.5);
    st.q90_m = quantile_sorted(signed_errors, 0.95) - quantile_sorted(signed_errors, 0.05);
    return st;
}

/// Empirical CDF points (|error|, cumulative probability); non-decreasing in
/// both coordinates, last probability exactly 1.
inline std::vector<std::pair<double, double>> error_cdf(std::vector<double> abs_errors) {
    std::sort(abs_errors.begin(), abs_errors.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(abs_errors.size());
    const double n = static_cast<double>(abs_errors.size());
    for (size_t i = 0; i < abs_errors.size(); ++i)
        cdf.emplace_back(abs_errors[i], static_cast<double>(i + 1) / n);
    return cdf;
}

} // namespace nbrange
