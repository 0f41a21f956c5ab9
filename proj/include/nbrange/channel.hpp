#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nbrange/common.hpp"
#include "nbrange/rng.hpp"

namespace nbrange {

/// Uniform frequency sampling grid: tone k sits at f0 + k * delta_f, k = 0..K-1.
struct ToneGrid {
    double f0_hz = 2.401e9;
    double delta_f_hz = 1.0e6;
    int num_tones = 80;

    double tone_freq_hz(int k) const { return f0_hz + k * delta_f_hz; }
    double omega0() const { return 2.0 * kPi * f0_hz; }
    double delta_omega() const { return 2.0 * kPi * delta_f_hz; }

    void validate() const {
        if (delta_f_hz <= 0.0) throw std::invalid_argument("ToneGrid: delta_f must be positive");
        if (num_tones < 2) throw std::invalid_argument("ToneGrid: need at least 2 tones");
    }
};

/// Single-cluster Saleh-Valenzuela parameters. Inter-ray gaps are exponential
/// with mean ray_rate_inv_s; ray powers decay exponentially with a constant
/// calibrated so the non-LoS profile has the requested RMS delay spread; the
/// LoS ray carries rician_db more power than all other rays combined.
struct SVParams {
    double tau0_s = 20.0e-9;
    double ray_rate_inv_s = 4.0e-9;
    double rician_db = 0.0;
    double rms_delay_spread_s = 22.0e-9;
    int max_paths = 64;
    double horizon_factor = 10.0; // path generation stops past horizon_factor * rms delay spread

    void validate() const {
        if (tau0_s <= 0.0) throw std::invalid_argument("SVParams: tau0 must be positive");
        if (ray_rate_inv_s <= 0.0) throw std::invalid_argument("SVParams: 1/lambda must be positive");
        if (rms_delay_spread_s <= 0.0) throw std::invalid_argument("SVParams: rms delay spread must be positive");
        if (max_paths < 1) throw std::invalid_argument("SVParams: need at least one path");
        if (horizon_factor <= 0.0) throw std::invalid_argument("SVParams: horizon must be positive");
    }
};

/// One multipath draw: path m has complex amplitude amplitudes[m] and delay
/// delays_s[m]; delays strictly ascending, delays_s[0] is the LoS delay.
struct ChannelRealization {
    CVec amplitudes;
    std::vector<double> delays_s;

    int paths() const { return static_cast<int>(delays_s.size()); }
};

/// Contiguous block of gap tones, inclusive on both ends.
struct GapBlock {
    int first = 0;
    int last = 0;
    bool interfered = false; // false: missing (never measured), true: measured but corrupted

    int width() const { return last - first + 1; }
};

/// Ordered list of disjoint gap blocks. Order is preserved; the recovery
/// scheduler depends on it only through Algorithm round grouping.
struct GapMap {
    std::vector<GapBlock> blocks;

    bool empty() const { return blocks.empty(); }

    void validate(int num_tones) const {
        for (const auto& b : blocks) {
            if (b.first < 0 || b.last >= num_tones || b.first > b.last)
                throw std::invalid_argument("GapMap: block out of range");
        }
        auto sorted = blocks;
        std::sort(sorted.begin(), sorted.end(), [](const GapBlock& x, const GapBlock& y) { return x.first < y.first; });
        for (size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].first <= sorted[i - 1].last)
                throw std::invalid_argument("GapMap: overlapping blocks");
    }
};

/// Per-tone IQ pairs plus availability masks. Tones with available=false are
/// stored (missing ones as zero) but must never be read by estimators.
struct IQCapture {
    ToneGrid grid;
    CVec iq_initiator;
    CVec iq_reflector;
    std::vector<uint8_t> available;
    std::vector<uint8_t> interfered;
};

/// Draws one SV channel realization. Deterministic given the seed: delays are
/// drawn first, then ray phases. Total power is normalized to 1 so the
/// per-path signal power entering the SNR definition is 1/M.
inline ChannelRealization sample_sv_channel(const SVParams& params, uint64_t seed) {
    params.validate();
    Rng rng(seed);

    ChannelRealization ch;
    ch.delays_s.push_back(params.tau0_s);
    const double horizon = params.horizon_factor * params.rms_delay_spread_s;
    double tau = params.tau0_s;
    while (static_cast<int>(ch.delays_s.size()) < params.max_paths) {
        tau += rng.exponential(params.ray_rate_inv_s);
        if (tau - params.tau0_s > horizon) break;
        ch.delays_s.push_back(tau);
    }

    const int m = static_cast<int>(ch.delays_s.size());
    std::vector<double> power(m);
    double nlos_sum = 0.0;
    for (int i = 1; i < m; ++i) {
        power[i] = std::exp(-(ch.delays_s[i] - params.tau0_s) / params.rms_delay_spread_s);
        nlos_sum += power[i];
    }
    const double kappa = std::pow(10.0, params.rician_db / 10.0);
    power[0] = (m > 1) ? kappa * nlos_sum : 1.0;

    double total = 0.0;
    for (double p : power) total += p;
    const double scale = 1.0 / std::sqrt(total);

    ch.amplitudes.resize(m);
    ch.amplitudes[0] = scale * std::sqrt(power[0]);
    for (int i = 1; i < m; ++i) {
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        ch.amplitudes[i] = std::polar(scale * std::sqrt(power[i]), phi);
    }
    return ch;
}

/// Frequency response h_k = sum_m a_m e^{-j w0 tau_m} e^{-j k dw tau_m}.
inline CVec channel_frequency_response(const ChannelRealization& ch, const ToneGrid& grid) {
    grid.validate();
    const int k_count = grid.num_tones;
    CVec h(k_count, 0.0);
    for (int m = 0; m < ch.paths(); ++m) {
        cdouble w = ch.amplitudes[m] * std::polar(1.0, -grid.omega0() * ch.delays_s[m]);
        const cdouble z = std::polar(1.0, -grid.delta_omega() * ch.delays_s[m]);
        for (int k = 0; k < k_count; ++k) {
            h[k] += w;
            w *= z;
        }
    }
    return h;
}

/// Mean per-path power, the signal power entering the SNR definition.
inline double per_path_signal_power(const ChannelRealization& ch) {
    double s = 0.0;
    for (const auto& a : ch.amplitudes) s += std::norm(a);
    return s / ch.paths();
}

/// Synthesizes one capture: per-tone PLL phase theta_k uniform on [0, 2pi),
/// initiator sees e^{-j theta_k} h_k, reflector e^{+j theta_k} h_k, both plus
/// complex Gaussian noise of variance N0 = per-path power / 10^(snr/10).
/// Phase and noise use separate streams so the same seed yields the same
/// theta_k sequence at every SNR (including snr_db = +inf, noise-free).
inline IQCapture synthesize_iq(const ChannelRealization& ch, const ToneGrid& grid, double snr_db, uint64_t seed) {
    grid.validate();
    if (ch.paths() < 1) throw std::invalid_argument("synthesize_iq: empty channel realization");

    const CVec h = channel_frequency_response(ch, grid);
    const bool noiseless = std::isinf(snr_db) && snr_db > 0.0;
    if (!std::isfinite(snr_db) && !noiseless) throw std::invalid_argument("synthesize_iq: bad SNR");
    const double n0 = noiseless ? 0.0 : per_path_signal_power(ch) / std::pow(10.0, snr_db / 10.0);

    Rng phase_rng(mix_seed(seed, 1));
    Rng noise_rng(mix_seed(seed, 2));

    IQCapture cap;
    cap.grid = grid;
    const int k_count = grid.num_tones;
    cap.iq_initiator.resize(k_count);
    cap.iq_reflector.resize(k_count);
    cap.available.assign(k_count, 1);
    cap.interfered.assign(k_count, 0);
    for (int k = 0; k < k_count; ++k) {
        const double theta = phase_rng.uniform(0.0, 2.0 * kPi);
        const cdouble rot = std::polar(1.0, theta);
        cdouble ni = 0.0, nr = 0.0;
        if (!noiseless) {
            ni = noise_rng.complex_normal(n0);
            nr = noise_rng.complex_normal(n0);
        }
        cap.iq_initiator[k] = h[k] * std::conj(rot) + ni;
        cap.iq_reflector[k] = h[k] * rot + nr;
    }
    return cap;
}

/// Applies a gap map. Missing tones are zeroed and masked out; interfered
/// tones keep signal plus an additive complex Gaussian interference term at
/// the configured SIR (relative to the mean available tone power) and are
/// masked out as well -- estimators treat both kinds identically.
inline IQCapture apply_gap_map(IQCapture capture, const GapMap& gaps, double interference_snr_db, uint64_t seed) {
    const int k_count = capture.grid.num_tones;
    gaps.validate(k_count);

    double mean_power = 0.0;
    for (int k = 0; k < k_count; ++k)
        mean_power += 0.5 * (std::norm(capture.iq_initiator[k]) + std::norm(capture.iq_reflector[k]));
    mean_power /= std::max(1, k_count);

    const bool silent = std::isinf(interference_snr_db) && interference_snr_db > 0.0;
    const double int_var = silent ? 0.0 : mean_power / std::pow(10.0, interference_snr_db / 10.0);

    Rng rng(seed);
    for (const auto& b : gaps.blocks) {
        for (int k = b.first; k <= b.last; ++k) {
            capture.available[k] = 0;
            if (b.interfered) {
                capture.interfered[k] = 1;
                if (!silent) {
                    capture.iq_initiator[k] += rng.complex_normal(int_var);
                    capture.iq_reflector[k] += rng.complex_normal(int_var);
                }
            } else {
                capture.iq_initiator[k] = 0.0;
                capture.iq_reflector[k] = 0.0;
            }
        }
    }
    return capture;
}

/// Benchmark gap presets 1..6. All share the missing blocks {0:2}, {78:79},
/// {24:26}; the interfered sets grow from none (preset 1) to the dense
/// configurations 5 and 6.
inline GapMap gap_preset(int index) {
    auto miss = [](int a, int b) { return GapBlock{a, b, false}; };
    auto intf = [](int a, int b) { return GapBlock{a, b, true}; };
    GapMap map;
    map.blocks = {miss(0, 2), miss(78, 79), miss(24, 26)};
    switch (index) {
    case 1:
        break;
    case 2:
        map.blocks.push_back(intf(27, 29));
        break;
    case 3:
        map.blocks.push_back(intf(59, 61));
        break;
    case 4:
        map.blocks.push_back(intf(59, 67));
        break;
    case 5:
        for (auto b : {intf(29, 30), intf(32, 32), intf(34, 36), intf(38, 38), intf(52, 55), intf(58, 59),
                       intf(62, 63), intf(65, 65)})
            map.blocks.push_back(b);
        break;
    case 6:
        for (auto b : {intf(12, 13), intf(37, 39), intf(40, 41), intf(53, 55), intf(61, 64), intf(70, 72)})
            map.blocks.push_back(b);
        break;
    default:
        throw std::invalid_argument("gap_preset: index must be 1..6");
    }
    return map;
}

inline GapMap gap_preset(const std::string& name) {
    if (name.size() == 4 && name.compare(0, 3, "gap") == 0 && name[3] >= '1' && name[3] <= '6')
        return gap_preset(name[3] - '0');
    throw std::invalid_argument("unknown gap preset: " + name);
}

} // namespace nbrange
