#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nbrange/common.hpp"
#include "nbrange/linalg.hpp"
#include "nbrange/reconstruct.hpp"

namespace nbrange {

enum class EstimatorMode { full, zero_pad, mps, wps };

inline const char* mode_name(EstimatorMode m) {
    switch (m) {
    case EstimatorMode::full: return "full";
    case EstimatorMode::zero_pad: return "zero_pad";
    case EstimatorMode::mps: return "mps";
    case EstimatorMode::wps: return "wps";
    }
    return "?";
}

struct MusicConfig {
    double tau_min_s = 0.0;
    double tau_max_s = 200.0e-9;
    double tau_step_s = 0.01e-9; // 3 mm distance resolution
    double eig_threshold_ratio = 1e-3;     // signal eigenvalues >= ratio * lambda_max
    double peak_prominence_ratio = 0.3;    // first peak must reach ratio * global max
    int min_band_tones = 2;                // shorter bands carry no subspace information
    std::optional<int> smoothing_override; // forces L in full / zero_pad modes
};

/// Signal subspace of one tone band: the leading eigenvectors of H^H H for the
/// band's Hankel matrix H with smoothing factor L.
struct SubspaceDecomposition {
    CMat signal_basis; // L x signal_dim, orthonormal columns
    int L = 0;
    std::vector<double> eigenvalues; // all L, descending

    int signal_dim() const { return signal_basis.cols(); }
    int noise_dim() const { return L - signal_basis.cols(); }
};

struct PseudoSpectrum {
    std::vector<double> tau_s;
    std::vector<double> values;
    bool clamped = false; // some grid point hit the denominator floor
};

struct BandDiagnostics {
    ToneBand band;
    int smoothing = 0;
    int signal_dim = 0;
};

struct RangeEstimate {
    double tau0_hat_s = 0.0;
    double distance_m = 0.0;
    EstimatorMode mode = EstimatorMode::full;
    int peak_index = -1;
    bool clamped = false;
    std::vector<BandDiagnostics> bands;         // bands that contributed
    std::vector<ToneBand> skipped_bands;        // too short for a decomposition
};

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smoothing factor maximizing the number of resolvable path delays for a
/// band of the given length: floor(len / 2) + 1.
inline int smoothing_factor(int band_len) {
    if (band_len < 1) throw std::invalid_argument("smoothing_factor: band length must be positive");
    return band_len / 2 + 1;
}

/// Smoothed covariance of one band: the sum of outer products x_r x_r^H over
/// all length-L windows x_r = [h_r, ..., h_{r+L-1}]^T, i.e. the conjugate of
/// the Hankel Gram matrix H^H H. This is the form whose signal subspace is
/// spanned by the e^{-j dw n tau} steering vectors.
inline CMat smoothed_covariance(const CVec& h_band, int L) {
    CMat g = gram(hankel(h_band, L));
    for (auto& v : g.data()) v = std::conj(v);
    return g;
}

/// Subspace split of one band from its smoothed covariance. Eigenvalues at or
/// above threshold_ratio * lambda_max count as signal.
inline SubspaceDecomposition decompose(const CVec& h_band, int L, double threshold_ratio) {
    const int len = static_cast<int>(h_band.size());
    if (len < 2) throw std::invalid_argument("decompose: band too short for MUSIC");
    if (L < 1 || L > len) throw std::invalid_argument("decompose: smoothing factor out of range");
    bool all_zero = true;
    for (const auto& v : h_band)
        if (v != cdouble(0.0, 0.0)) { all_zero = false; break; }
    if (all_zero) throw std::invalid_argument("decompose: zero band");

    EigenDecomposition eig = eig_hermitian(smoothed_covariance(h_band, L));

    const double lambda_max = eig.eigenvalues.front();
    int sig = 0;
    while (sig < L && eig.eigenvalues[sig] >= threshold_ratio * lambda_max) ++sig;

    SubspaceDecomposition dec;
    dec.L = L;
    dec.eigenvalues = std::move(eig.eigenvalues);
    dec.signal_basis = CMat(L, sig);
    for (int c = 0; c < sig; ++c)
        for (int r = 0; r < L; ++r) dec.signal_basis(r, c) = eig.eigenvectors(r, c);
    return dec;
}

/// Steering vector e(tau), element n = exp(-j * delta_omega * n * tau).
inline CVec steering(double tau_s, int L, double delta_omega) {
    if (L < 1) throw std::invalid_argument("steering: L must be positive");
    CVec e(L);
    cdouble v = 1.0;
    const cdouble z = std::polar(1.0, -delta_omega * tau_s);
    for (int n = 0; n < L; ++n) {
        e[n] = v;
        v *= z;
    }
    return e;
}

namespace detail {

inline std::vector<double> tau_grid(const MusicConfig& cfg) {
    if (!(cfg.tau_step_s > 0.0) || cfg.tau_max_s < cfg.tau_min_s)
        throw std::invalid_argument("MusicConfig: bad tau grid");
    const int n = static_cast<int>(std::floor((cfg.tau_max_s - cfg.tau_min_s) / cfg.tau_step_s + 0.5)) + 1;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = cfg.tau_min_s + i * cfg.tau_step_s;
    return grid;
}

/// Signal basis stored adjoint (rows = conj eigenvectors) for contiguous
/// steering products.
struct BandEval {
    std::vector<cdouble> basis_adjoint; // signal_dim x L, row-major
    int L = 0;
    int signal_dim = 0;

    explicit BandEval(const SubspaceDecomposition& dec)
        : basis_adjoint(static_cast<size_t>(dec.signal_dim()) * dec.L), L(dec.L), signal_dim(dec.signal_dim()) {
        for (int s = 0; s < signal_dim; ++s)
            for (int n = 0; n < L; ++n) basis_adjoint[static_cast<size_t>(s) * L + n] = std::conj(dec.signal_basis(n, s));
    }

    /// L - ||V_S^H e(tau)||^2 for a steering vector prefix of length L
    double denominator(const CVec& e) const {
        double proj = 0.0;
        for (int s = 0; s < signal_dim; ++s) {
            const cdouble* row = basis_adjoint.data() + static_cast<size_t>(s) * L;
            cdouble acc = 0.0;
            for (int n = 0; n < L; ++n) acc += row[n] * e[n];
            proj += std::norm(acc);
        }
        return static_cast<double>(L) - proj;
    }
};

} // namespace detail

/// Pseudospectrum over the tau grid, combining one or more band subspaces.
/// One band reduces to 1 / (L - e^H V_S V_S^H e); several bands combine by
/// the product of per-band denominators (mps=true) or by the smoothing-factor
/// weighted sum (mps=false). Each band term is clamped at 1e-12 * L_j to keep
/// J finite when a decomposition spans the whole space.
inline PseudoSpectrum pseudospectrum(const std::vector<SubspaceDecomposition>& decs, double delta_omega,
                                     const MusicConfig& cfg, bool mps = true) {
    if (decs.empty()) throw std::invalid_argument("pseudospectrum: no decompositions");
    std::vector<detail::BandEval> evals;
    evals.reserve(decs.size());
    int max_L = 0;
    for (const auto& d : decs) {
        evals.emplace_back(d);
        max_L = std::max(max_L, d.L);
    }

    PseudoSpectrum ps;
    ps.tau_s = detail::tau_grid(cfg);
    ps.values.resize(ps.tau_s.size());

    CVec e(max_L);
    for (size_t i = 0; i < ps.tau_s.size(); ++i) {
        const cdouble z = std::polar(1.0, -delta_omega * ps.tau_s[i]);
        cdouble v = 1.0;
        for (int n = 0; n < max_L; ++n) {
            e[n] = v;
            v *= z;
        }
        double value;
        if (mps) {
            double prod = 1.0;
            for (const auto& ev : evals) {
                double den = ev.denominator(e);
                const double floor_j = 1e-12 * ev.L;
                if (den < floor_j) {
                    den = floor_j;
                    ps.clamped = true;
                }
                prod *= den;
            }
            value = 1.0 / prod;
        } else {
            double sum = 0.0;
            double floor_sum = 0.0;
            for (const auto& ev : evals) {
                double den = ev.denominator(e);
                const double floor_j = 1e-12 * ev.L;
                if (den < floor_j) {
                    den = floor_j;
                    ps.clamped = true;
                }
                sum += ev.L * den;
                floor_sum += ev.L * floor_j;
            }
            if (sum < floor_sum) sum = floor_sum;
            value = 1.0 / sum;
        }
        ps.values[i] = value;
    }
    return ps;
}

inline PseudoSpectrum pseudospectrum(const SubspaceDecomposition& dec, double delta_omega, const MusicConfig& cfg) {
    return pseudospectrum(std::vector<SubspaceDecomposition>{dec}, delta_omega, cfg, true);
}

/// First peak: the smallest-tau local maximum whose value reaches
/// prominence_ratio times the global maximum. Grid boundary points count as
/// local maxima toward their inner neighbor.
inline double first_peak(const PseudoSpectrum& ps, double prominence_ratio, int* peak_index = nullptr) {
    const auto& v = ps.values;
    const int n = static_cast<int>(v.size());
    if (n == 0) throw EstimationError("first_peak: empty pseudospectrum");
    const double global_max = *std::max_element(v.begin(), v.end());
    const double floor_v = prominence_ratio * global_max;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || v[i] > v[i - 1];
        const bool right_ok = (i == n - 1) || v[i] >= v[i + 1];
        if (left_ok && right_ok && v[i] >= floor_v) {
            if (peak_index) *peak_index = i;
            return ps.tau_s[i];
        }
    }
    throw EstimationError("first_peak: no qualifying peak");
}

/// End-to-end range estimation from a capture.
///  - full:     single-band MUSIC across all K tones (requires no gaps)
///  - zero_pad: gap tones' h^2 forced to zero, then single-band MUSIC
///  - mps/wps:  per-band subspaces with Proposition-style smoothing factors,
///              combined by product / weighted sum
inline RangeEstimate estimate_range(const IQCapture& capture, EstimatorMode mode, const MusicConfig& cfg) {
    const int k_count = capture.grid.num_tones;
    TwoWayResponse resp = two_way(capture);
    RangeEstimate est;
    est.mode = mode;

    std::vector<SubspaceDecomposition> decs;
    if (mode == EstimatorMode::full || mode == EstimatorMode::zero_pad) {
        if (mode == EstimatorMode::full) {
            for (int k = 0; k < k_count; ++k)
                if (!capture.available[k]) throw EstimationError("estimate_range: full mode requires a gap-free grid");
        } else {
            for (int k = 0; k < k_count; ++k)
                if (!resp.available[k]) resp.h_sq[k] = 0.0;
            resp.available.assign(k_count, 1);
        }
        const ToneBand band{0, k_count - 1};
        const CVec h_tilde = reconstruct_band(resp, band);
        const int L = cfg.smoothing_override.value_or(smoothing_factor(k_count));
        decs.push_back(decompose(h_tilde, L, cfg.eig_threshold_ratio));
        est.bands.push_back({band, L, decs.back().signal_dim()});
    } else {
        const auto bands = find_bands(resp.available);
        if (bands.empty()) throw EstimationError("estimate_range: no available tones");
        for (const auto& band : bands) {
            if (band.length() < cfg.min_band_tones) {
                est.skipped_bands.push_back(band);
                continue;
            }
            const CVec h_tilde = reconstruct_band(resp, band);
            const int L = smoothing_factor(band.length());
            decs.push_back(decompose(h_tilde, L, cfg.eig_threshold_ratio));
            est.bands.push_back({band, L, decs.back().signal_dim()});
        }
        if (decs.empty()) throw EstimationError("estimate_range: every band too short for a decomposition");
    }

    const PseudoSpectrum ps =
        pseudospectrum(decs, capture.grid.delta_omega(), cfg, mode != EstimatorMode::wps);
    est.clamped = ps.clamped;
    est.tau0_hat_s = first_peak(ps, cfg.peak_prominence_ratio, &est.peak_index);
    est.distance_m = kSpeedOfLight * est.tau0_hat_s;
    return est;
}

/// Range estimation from an already completed squared response (all tones
/// available), e.g. after gap recovery.
inline RangeEstimate estimate_range_from_hsq(const TwoWayResponse& resp, const MusicConfig& cfg) {
    const int k_count = resp.grid.num_tones;
    for (int k = 0; k < k_count; ++k)
        if (!resp.available[k]) throw EstimationError("estimate_range_from_hsq: response not fully populated");
    const ToneBand band{0, k_count - 1};
    const CVec h_tilde = reconstruct_band(resp, band);
    const int L = cfg.smoothing_override.value_or(smoothing_factor(k_count));

    RangeEstimate est;
    est.mode = EstimatorMode::full;
    std::vector<SubspaceDecomposition> decs{decompose(h_tilde, L, cfg.eig_threshold_ratio)};
    est.bands.push_back({band, L, decs.front().signal_dim()});
    const PseudoSpectrum ps = pseudospectrum(decs, resp.grid.delta_omega(), cfg, true);
    est.clamped = ps.clamped;
    est.tau0_hat_s = first_peak(ps, cfg.peak_prominence_ratio, &est.peak_index);
    est.distance_m = kSpeedOfLight * est.tau0_hat_s;
    return est;
}

} // namespace nbrange
